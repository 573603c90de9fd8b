#include "zeroprop/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "zeroprop/errors.hpp"

namespace zeroprop {
namespace {

// I_k(x) = ∫₀¹ t^k e^{x t} dt for k = 0..kmax, each from a positive-term
// series:
//   x >= 0:  I_k = Σ_j x^j / (j! (k + j + 1))
//   x <  0:  I_k = e^x Σ_j (-x)^j k! / (k + j + 1)!
std::vector<double> exp_moments(double x, int kmax) {
  std::vector<double> out(static_cast<std::size_t>(kmax + 1));
  const double y = std::fabs(x);
  for (int k = 0; k <= kmax; ++k) {
    double term = 1.0 / (k + 1);
    double sum = term;
    for (int j = 1; j < 10000; ++j) {
      term *= x >= 0 ? y * (k + j) / (static_cast<double>(j) * (k + j + 1)) : y / (k + j + 1);
      sum += term;
      if (term <= 1e-17 * sum) break;
    }
    out[static_cast<std::size_t>(k)] = x >= 0 ? sum : std::exp(x) * sum;
  }
  return out;
}

// E(a + b) with E(s) = (1 - e^{-s}) / s = ∫₀¹ e^{-s t} dt, entire in s.
// Normalized entry (m, n) is E^{(m+n)}(s0) / (m! n!) = (-1)^{m+n} I_{m+n}(-s0) / (m! n!).
Jet2 phi_jet(BasePoint base, int order) {
  const auto moments_of_exp = exp_moments(-(base.a + base.b), 2 * order);
  std::vector<double> inv_fact(static_cast<std::size_t>(order + 1), 1.0);
  for (int i = 1; i <= order; ++i) inv_fact[static_cast<std::size_t>(i)] = inv_fact[static_cast<std::size_t>(i - 1)] / i;
  const int s = order + 1;
  std::vector<double> c(static_cast<std::size_t>(s * s));
  for (int m = 0; m < s; ++m) {
    for (int n = 0; n < s; ++n) {
      const double sign = (m + n) % 2 == 0 ? 1.0 : -1.0;
      c[static_cast<std::size_t>(m * s + n)] = sign * moments_of_exp[static_cast<std::size_t>(m + n)] *
                                               inv_fact[static_cast<std::size_t>(m)] *
                                               inv_fact[static_cast<std::size_t>(n)];
    }
  }
  return Jet2(base, order, std::move(c));
}

}  // namespace

MomentTable moments(const Poly& p1, const Poly& p2) {
  const Poly d1 = poly_derivative(p1);
  const Poly d2 = poly_derivative(p2);
  return MomentTable{integrate01_product(d1, d2), integrate01_product(d1, p2), integrate01_product(p1, d2),
                     integrate01_product(p1, p2)};
}

void KernelSpec::validate() const {
  if (!(theta > 0.0)) throw std::invalid_argument("kernel theta must be positive");
  if (!(base_R >= 1e-6)) throw std::invalid_argument("kernel base_R must be at least 1e-6");
  if (order < 0) throw std::invalid_argument("kernel jet order must be non-negative");
}

Jet2 g_jet(const MomentTable& mt, double theta, BasePoint base, int order, bool swap, bool negate) {
  // The only rounding step: exact moments to binary64.
  const double dd = to_double(mt.dd);
  const double dp = to_double(mt.dp);
  const double pd = to_double(mt.pd);
  const double pp = to_double(mt.pp);

  Jet2 x = Jet2::var_a(base, order);
  Jet2 y = Jet2::var_b(base, order);
  if (swap) std::swap(x, y);
  if (negate) {
    x = -x;
    y = -y;
  }
  const Jet2 one = Jet2::constant(1.0, base, order);
  return dd * one + (theta * pd) * x + (theta * dp) * y + (theta * theta * pp) * (x * y);
}

Jet2 kernel_numerator_jet(const MomentTable& mt, double theta, BasePoint base, int order) {
  const Jet2 a = Jet2::var_a(base, order);
  const Jet2 b = Jet2::var_b(base, order);
  const Jet2 damp = exp(-(a + b));
  return g_jet(mt, theta, base, order, /*swap=*/true, /*negate=*/false) -
         damp * g_jet(mt, theta, base, order, /*swap=*/false, /*negate=*/true);
}

Jet2 kernel_jet_at(const MomentTable& mt, double theta, BasePoint base, int order) {
  // g(b,a) - g(-a,-b) = θ (a+b)(pd + dp), so
  //   h = (pd + dp) + g(-a,-b) E(a+b) / θ.
  const double cross = to_double(mt.pd) + to_double(mt.dp);
  const Jet2 g_neg = g_jet(mt, theta, base, order, /*swap=*/false, /*negate=*/true);
  return Jet2::constant(cross, base, order) + (1.0 / theta) * (g_neg * phi_jet(base, order));
}

Jet2 kernel_jet_by_division(const MomentTable& mt, double theta, BasePoint base, int order) {
  const Jet2 denom = theta * (Jet2::var_a(base, order) + Jet2::var_b(base, order));
  return kernel_numerator_jet(mt, theta, base, order) * reciprocal(denom);
}

Jet2 kernel_jet(const KernelSpec& spec) {
  spec.validate();
  return kernel_jet_at(spec.moments, spec.theta, BasePoint{-spec.base_R, -spec.base_R}, spec.order);
}

}  // namespace zeroprop
