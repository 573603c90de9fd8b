#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "support/gen.hpp"
#include "zeroprop/errors.hpp"
#include "zeroprop/oracle.hpp"

using namespace zeroprop;
using zeroprop::testing::Gen;
using zeroprop::testing::rel;

namespace {

const BasePoint kOrigin{0, 0};
const BasePoint kRef{-0.617, -0.617};

double max_entry_diff(const Jet2& f, const Jet2& g) {
  double m = 0;
  for (int i = 0; i <= f.order(); ++i)
    for (int j = 0; j <= f.order(); ++j) m = std::max(m, std::fabs(f.coeff(i, j) - g.coeff(i, j)));
  return m;
}

double max_entry(const Jet2& f) {
  double m = 0;
  for (double v : f.coeffs()) m = std::max(m, std::fabs(v));
  return m;
}

// Checks every first and second derivative of the jet against Richardson
// central differences at steps 1e-4 and 1e-5.
void check_against_differences(const Jet2& jet, const oracle::ScalarField& f) {
  const int pairs[][2] = {{1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}};
  for (auto [m, n] : pairs) {
    if (m > jet.order() || n > jet.order()) continue;
    const double coarse = oracle::fd_partial_richardson(f, {1e-4, 2}, m, n, jet.base());
    const double fine = oracle::fd_partial_richardson(f, {1e-5, 2}, m, n, jet.base());
    const double exact = jet.derivative(m, n);
    const double scale = std::max(1.0, std::fabs(exact));
    const double err = std::min(std::fabs(coarse - exact), std::fabs(fine - exact)) / scale;
    CAPTURE(m);
    CAPTURE(n);
    CHECK(err <= 1e-6);
  }
}

}  // namespace

TEST_CASE("constructors") {
  const Jet2 c = Jet2::constant(2, kOrigin, 2);
  CHECK(c.value() == 2);
  CHECK(max_entry(c - Jet2::constant(2, kOrigin, 2)) == 0);
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; j <= 2; ++j)
      if (i + j > 0) CHECK(c.coeff(i, j) == 0);

  const Jet2 va = Jet2::var_a(kRef, 1);
  CHECK(va.value() == -0.617);
  CHECK(va.coeff(1, 0) == 1);
  CHECK(va.coeff(0, 1) == 0);
  CHECK(va.coeff(1, 1) == 0);

  const Jet2 vb = Jet2::var_b({1, 2}, 3);
  CHECK(vb.value() == 2);
  CHECK(vb.coeff(0, 1) == 1);
  CHECK(vb.coeff(1, 0) == 0);

  CHECK_THROWS_AS(Jet2(kOrigin, 1, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(Jet2(kOrigin, 0, {std::nan("")}), NonFinite);
  CHECK_THROWS_AS(Jet2(kOrigin, 0, {INFINITY}), NonFinite);
}

TEST_CASE("multiplication") {
  const Jet2 ab = Jet2::var_a(kOrigin, 2) * Jet2::var_b(kOrigin, 2);
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; j <= 2; ++j) CHECK(ab.coeff(i, j) == (i == 1 && j == 1 ? 1.0 : 0.0));

  Gen g(201);
  const Jet2 f = g.jet(kRef, 3);
  CHECK(max_entry_diff(f * Jet2::constant(1, kRef, 3), f) == 0);

  // (a0 + da)(b0 + db) = a0 b0 + b0 da + a0 db + da db
  const BasePoint base{1.5, -2.0};
  const Jet2 p = (Jet2::var_a(base, 1) * Jet2::var_b(base, 1));
  CHECK(p.coeff(0, 0) == -3.0);
  CHECK(p.coeff(1, 0) == -2.0);
  CHECK(p.coeff(0, 1) == 1.5);
  CHECK(p.coeff(1, 1) == 1.0);

  CHECK_THROWS_AS(f * Jet2::constant(1, kOrigin, 3), std::invalid_argument);
  CHECK_THROWS_AS(f * Jet2::constant(1, kRef, 2), std::invalid_argument);
}

TEST_CASE("exp") {
  CHECK(max_entry_diff(exp(Jet2::constant(0, kOrigin, 3)), Jet2::constant(1, kOrigin, 3)) == 0);

  const auto minus_ab = [](BasePoint base, int k) { return -(Jet2::var_a(base, k) + Jet2::var_b(base, k)); };
  const Jet2 e0 = exp(minus_ab(kOrigin, 2));
  for (int m = 0; m <= 2; ++m)
    for (int n = 0; n <= 2; ++n)
      CHECK(e0.coeff(m, n) == doctest::Approx(std::pow(-1.0, m + n) / (std::tgamma(m + 1) * std::tgamma(n + 1))));
  CHECK(extract(exp(minus_ab(kOrigin, 3)), 2, 1) == doctest::Approx(-1.0));

  const Jet2 e = exp(minus_ab(kRef, 2));
  CHECK(e.value() == doctest::Approx(std::exp(1.234)).epsilon(1e-15));
  check_against_differences(e, [](double a, double b) { return std::exp(-a - b); });
}

TEST_CASE("reciprocal") {
  CHECK(max_entry_diff(reciprocal(Jet2::constant(2, kOrigin, 2)), Jet2::constant(0.5, kOrigin, 2)) == 0);

  const BasePoint one{1, 1};
  const Jet2 r = reciprocal(Jet2::var_a(one, 2) + Jet2::var_b(one, 2));
  CHECK(r.value() == doctest::Approx(0.5));
  CHECK(r.derivative(1, 0) == doctest::Approx(-0.25));
  CHECK(r.derivative(1, 1) == doctest::Approx(0.25));

  const Jet2 rr = reciprocal(Jet2::var_a(kRef, 2) + Jet2::var_b(kRef, 2));
  CHECK(rr.value() == doctest::Approx(-1 / 1.234).epsilon(1e-15));
  check_against_differences(rr, [](double a, double b) { return 1 / (a + b); });

  CHECK_THROWS_AS(reciprocal(Jet2::var_a({0.5, -0.5}, 2) + Jet2::var_b({0.5, -0.5}, 2)), NearSingular);
}

TEST_CASE("extract") {
  Gen g(202);
  const Jet2 f = g.jet(kRef, 3);
  CHECK(extract(f, 0, 0) == f.value());
  CHECK(extract(Jet2::var_a(kOrigin, 2) * Jet2::var_b(kOrigin, 2), 1, 1) == 1);
  CHECK(extract(f, 2, 3) == doctest::Approx(f.coeff(2, 3) * 2 * 6));
  CHECK_THROWS_AS(extract(f, 4, 0), std::out_of_range);
}

TEST_CASE("transpose and truncate") {
  Gen g(203);
  const Jet2 f = g.jet({0.1, 0.7}, 3);
  const Jet2 t = f.transposed();
  CHECK(t.base() == BasePoint{0.7, 0.1});
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= 3; ++j) CHECK(t.coeff(i, j) == f.coeff(j, i));
  const Jet2 up = f.truncated(5);
  CHECK(up.coeff(5, 5) == 0);
  CHECK(max_entry_diff(up.truncated(3), f) == 0);
}

TEST_CASE("property: ring laws") {
  Gen g(204);
  for (int i = 0; i < 100; ++i) {
    const int k = g.integer(0, 5);
    const BasePoint base{g.uniform(-2, 2), g.uniform(-2, 2)};
    const Jet2 a = g.jet(base, k), b = g.jet(base, k), c = g.jet(base, k);
    const double ulps = 64 * std::numeric_limits<double>::epsilon() * (k + 1) * (k + 1);
    CHECK(max_entry_diff(a * b, b * a) <= ulps * max_entry(a * b));
    CHECK(max_entry_diff((a * b) * c, a * (b * c)) <= ulps * max_entry(a * b * c));
    CHECK(max_entry_diff(a * (b + c), a * b + a * c) <= ulps * max_entry(a * b + a * c));
  }
}

TEST_CASE("property: exp is a homomorphism") {
  Gen g(205);
  for (int i = 0; i < 100; ++i) {
    const int k = g.integer(0, 5);
    const BasePoint base{g.uniform(-1, 1), g.uniform(-1, 1)};
    const Jet2 f = g.jet(base, k), h = g.jet(base, k);
    const Jet2 lhs = exp(f + h), rhs = exp(f) * exp(h);
    CHECK(max_entry_diff(lhs, rhs) <= 1e-12 * std::max(1.0, max_entry(rhs)));
  }
}

TEST_CASE("property: reciprocal is an inverse") {
  Gen g(206);
  for (int i = 0; i < 100; ++i) {
    const int k = g.integer(0, 5);
    const BasePoint base{g.uniform(-1, 1), g.uniform(-1, 1)};
    std::vector<double> c(static_cast<std::size_t>((k + 1) * (k + 1)));
    for (auto& v : c) v = g.uniform(-0.3, 0.3);
    c[0] = g.uniform(0.5, 2.0) * (g.integer(0, 1) ? 1 : -1);
    const Jet2 f(base, k, c);
    CHECK(max_entry_diff(f * reciprocal(f), Jet2::constant(1, base, k)) <= 1e-12);
  }
}

TEST_CASE("property: composed expressions match finite differences") {
  Gen g(207);
  for (int i = 0; i < 100; ++i) {
    const double p = g.uniform(-1, 1), q = g.uniform(-1, 1), s = g.uniform(1, 3);
    const BasePoint base{g.uniform(-1, 1), g.uniform(-1, 1)};
    const Jet2 a = Jet2::var_a(base, 2), b = Jet2::var_b(base, 2);
    // f(a,b) = exp(p a + q b) / (s + a b)
    const Jet2 f = exp(p * a + q * b) * reciprocal(Jet2::constant(s, base, 2) + a * b);
    if (std::fabs(s + base.a * base.b) < 0.2) continue;
    check_against_differences(f, [&](double x, double y) { return std::exp(p * x + q * y) / (s + x * y); });
  }
}

TEST_CASE("property: truncation consistency") {
  Gen g(208);
  for (int i = 0; i < 50; ++i) {
    const int k = g.integer(0, 4);
    const BasePoint base{g.uniform(-1, 1), g.uniform(0.5, 1.5)};
    const double p = g.uniform(-1, 1);
    const auto build = [&](int order) {
      const Jet2 a = Jet2::var_a(base, order), b = Jet2::var_b(base, order);
      return exp(p * a - b) * reciprocal(a * a + b * b + Jet2::constant(1, base, order));
    };
    CHECK(max_entry_diff(build(k + 2).truncated(k), build(k)) <= 1e-13);
  }
}
