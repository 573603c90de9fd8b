#pragma once

// Seeded generators for property tests. Coefficients are drawn as short
// decimals so they are exactly representable as rationals and as strings.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "zeroprop/jet.hpp"
#include "zeroprop/kernel.hpp"
#include "zeroprop/poly.hpp"
#include "zeroprop/proportions.hpp"

namespace zeroprop::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  // k/1000 for k uniform in [lo*1000, hi*1000].
  Rational decimal(double lo, double hi) {
    const auto k = std::uniform_int_distribution<long>(std::lround(lo * 1000), std::lround(hi * 1000))(rng_);
    Rational r(k, 1000);
    r.canonicalize();
    return r;
  }

  std::vector<Rational> decimals(std::size_t n, double lo, double hi) {
    std::vector<Rational> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(decimal(lo, hi));
    return out;
  }

  Poly poly(std::size_t max_degree, double lo = -2.0, double hi = 2.0) {
    return Poly(decimals(static_cast<std::size_t>(integer(0, static_cast<int>(max_degree))) + 1, lo, hi));
  }

  MollifierShape mollifier(std::size_t max_len, double lo = -1.0, double hi = 1.0) {
    return MollifierShape{decimals(static_cast<std::size_t>(integer(0, static_cast<int>(max_len))), lo, hi)};
  }

  // Expansion degree is 1 + 2 * sym_coeffs.size(), so max_sym = 2 keeps deg Q <= 5.
  TwistShape twist(std::size_t max_sym, double lo = -1.0, double hi = 1.0) {
    TwistShape s;
    s.linear_coeff = decimal(lo, hi);
    s.sym_coeffs = decimals(static_cast<std::size_t>(integer(0, static_cast<int>(max_sym))), lo, hi);
    return s;
  }

  MomentTable moment_table() {
    return MomentTable{decimal(-2, 2), decimal(-2, 2), decimal(-2, 2), decimal(-2, 2)};
  }

  Jet2 jet(BasePoint base, int order, double scale = 1.0) {
    std::vector<double> c(static_cast<std::size_t>((order + 1) * (order + 1)));
    for (auto& v : c) v = uniform(-scale, scale);
    return Jet2(base, order, std::move(c));
  }

  SectionFourParams section4() {
    SectionFourParams p;
    p.p1_shape = mollifier(3);
    p.p2_shape = mollifier(3);
    p.theta = uniform(0.3, 1.0);
    p.r = uniform(0.5, 3.0);
    p.R = uniform(0.1, 2.0);
    return p;
  }

  SectionFiveParams section5() {
    SectionFiveParams p;
    p.p_shape = mollifier(3);
    p.q_shape = twist(2);
    p.theta = uniform(0.3, 1.0);
    p.R = uniform(0.1, 2.0);
    p.delta = uniform(0.0, 1.2);
    return p;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double rel(double x, double y) { return std::fabs(x - y) / std::max(std::fabs(y), 1e-300); }

// Parameter sets used throughout the tests.
inline SectionFourParams reference_section4() {
  SectionFourParams p;
  p.p1_shape = {{parse_decimal("-0.158"), parse_decimal("0.25")}};
  p.p2_shape = {{parse_decimal("0.492"), parse_decimal("0.075")}};
  p.theta = 1.0;
  p.r = 1.154;
  p.R = 0.617;
  return p;
}

inline SectionFourParams literal_section4() {
  auto p = reference_section4();
  p.p2_shape.coeffs[0] = parse_decimal("-0.492");
  return p;
}

inline SectionFiveParams reference_section5() {
  SectionFiveParams p;
  p.p_shape = {{parse_decimal("-0.482"), parse_decimal("-0.392"), parse_decimal("-0.262")}};
  p.q_shape = {parse_decimal("-0.673"), {parse_decimal("0.369"), parse_decimal("-4.635")}};
  p.theta = 1.0;
  p.R = 0.746;
  p.delta = 0.771;
  return p;
}

// High-precision values from tests/oracle/derive_values.py.
namespace frozen {
inline constexpr double c = 1.2301085737954216692;
inline constexpr double nu = 0.16783017574313521623;
inline constexpr double c_literal = 1.5303158151789645585;
inline constexpr double c1 = 1.0471158196303350887;
inline constexpr double kappa = 0.93828479056470396417;
inline constexpr double d = 0.80131221953921676585;
inline constexpr double s = 0.6026244390784335317;
inline constexpr double d_grh = 0.83216982425686478377;
inline constexpr double s_grh = 0.66433964851372956753;
inline constexpr double h_xx_half = 3.720612895060154956;
inline constexpr double c1_delta0 = 5.8009389356421687827;
inline constexpr double c_probe = 7.789048764875198876;
inline constexpr double c1_probe = 10.022206135636609767;
}  // namespace frozen

}  // namespace zeroprop::testing
