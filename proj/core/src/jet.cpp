#include "zeroprop/jet.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "zeroprop/errors.hpp"

namespace zeroprop {
namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void require_compatible(const Jet2& f, const Jet2& g) {
  if (f.order() != g.order() || !(f.base() == g.base())) {
    throw std::invalid_argument("jet operands differ in base point or order");
  }
}

// Univariate truncated series in a (length K+1), the coefficients of the
// outer series in b.
using Series = std::vector<double>;

Series series_mul(const Series& x, const Series& y) {
  const std::size_t n = x.size();
  Series out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0.0) continue;
    for (std::size_t j = 0; i + j < n; ++j) out[i + j] += x[i] * y[j];
  }
  return out;
}

Series series_exp(const Series& u) {
  const std::size_t n = u.size();
  Series e(n, 0.0);
  e[0] = std::exp(u[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * u[j] * e[k - j];
    e[k] = acc / static_cast<double>(k);
  }
  return e;
}

Series series_recip(const Series& u) {
  const std::size_t n = u.size();
  Series w(n, 0.0);
  w[0] = 1.0 / u[0];
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) acc += u[j] * w[k - j];
    w[k] = -acc * w[0];
  }
  return w;
}

// Splits a jet into its b-series whose coefficients are a-series:
// column n of the grid is the a-series multiplying db^n.
std::vector<Series> columns(const Jet2& f) {
  const int s = f.stride();
  std::vector<Series> cols(static_cast<std::size_t>(s), Series(static_cast<std::size_t>(s)));
  for (int m = 0; m < s; ++m) {
    for (int n = 0; n < s; ++n) cols[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)] = f.coeff(m, n);
  }
  return cols;
}

Jet2 from_columns(BasePoint base, int order, const std::vector<Series>& cols) {
  const int s = order + 1;
  std::vector<double> c(static_cast<std::size_t>(s * s));
  for (int m = 0; m < s; ++m) {
    for (int n = 0; n < s; ++n) {
      c[static_cast<std::size_t>(m * s + n)] = cols[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)];
    }
  }
  return Jet2(base, order, std::move(c));
}

}  // namespace

Jet2::Jet2(BasePoint base, int order, std::vector<double> coeffs)
    : base_(base), order_(order), coeffs_(std::move(coeffs)) {
  if (order_ < 0) throw std::invalid_argument("jet order must be non-negative");
  if (coeffs_.size() != static_cast<std::size_t>(stride() * stride())) {
    throw std::invalid_argument("jet grid has " + std::to_string(coeffs_.size()) + " entries, expected " +
                                std::to_string(stride() * stride()));
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw NonFinite("jet entry is not finite");
  }
}

Jet2 Jet2::constant(double v, BasePoint base, int order) {
  std::vector<double> c(static_cast<std::size_t>((order + 1) * (order + 1)), 0.0);
  c[0] = v;
  return Jet2(base, order, std::move(c));
}

Jet2 Jet2::var_a(BasePoint base, int order) {
  std::vector<double> c(static_cast<std::size_t>((order + 1) * (order + 1)), 0.0);
  c[0] = base.a;
  if (order >= 1) c[static_cast<std::size_t>(order + 1)] = 1.0;
  return Jet2(base, order, std::move(c));
}

Jet2 Jet2::var_b(BasePoint base, int order) {
  std::vector<double> c(static_cast<std::size_t>((order + 1) * (order + 1)), 0.0);
  c[0] = base.b;
  if (order >= 1) c[1] = 1.0;
  return Jet2(base, order, std::move(c));
}

double Jet2::derivative(int m, int n) const {
  if (m < 0 || n < 0 || m > order_ || n > order_) {
    throw std::out_of_range("derivative order (" + std::to_string(m) + "," + std::to_string(n) +
                            ") exceeds jet order " + std::to_string(order_));
  }
  return coeff(m, n) * factorial(m) * factorial(n);
}

Jet2 Jet2::transposed() const {
  std::vector<double> c(coeffs_.size());
  const int s = stride();
  for (int m = 0; m < s; ++m) {
    for (int n = 0; n < s; ++n) c[static_cast<std::size_t>(n * s + m)] = coeff(m, n);
  }
  return Jet2(BasePoint{base_.b, base_.a}, order_, std::move(c));
}

Jet2 Jet2::truncated(int order) const {
  const int s = order + 1;
  std::vector<double> c(static_cast<std::size_t>(s * s), 0.0);
  for (int m = 0; m < s && m <= order_; ++m) {
    for (int n = 0; n < s && n <= order_; ++n) c[static_cast<std::size_t>(m * s + n)] = coeff(m, n);
  }
  return Jet2(base_, order, std::move(c));
}

Jet2 operator+(const Jet2& f, const Jet2& g) {
  require_compatible(f, g);
  std::vector<double> c(f.coeffs().begin(), f.coeffs().end());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += g.coeffs()[i];
  return Jet2(f.base(), f.order(), std::move(c));
}

Jet2 operator-(const Jet2& f) { return -1.0 * f; }

Jet2 operator-(const Jet2& f, const Jet2& g) { return f + (-1.0 * g); }

Jet2 operator*(double s, const Jet2& f) {
  std::vector<double> c(f.coeffs().begin(), f.coeffs().end());
  for (double& x : c) x *= s;
  return Jet2(f.base(), f.order(), std::move(c));
}

Jet2 operator*(const Jet2& f, double s) { return s * f; }

Jet2 operator*(const Jet2& f, const Jet2& g) {
  require_compatible(f, g);
  const int s = f.stride();
  std::vector<double> c(static_cast<std::size_t>(s * s), 0.0);
  for (int m1 = 0; m1 < s; ++m1) {
    for (int n1 = 0; n1 < s; ++n1) {
      const double x = f.coeff(m1, n1);
      if (x == 0.0) continue;
      for (int m2 = 0; m1 + m2 < s; ++m2) {
        for (int n2 = 0; n1 + n2 < s; ++n2) {
          c[static_cast<std::size_t>((m1 + m2) * s + n1 + n2)] += x * g.coeff(m2, n2);
        }
      }
    }
  }
  return Jet2(f.base(), f.order(), std::move(c));
}

Jet2 exp(const Jet2& f) {
  // Outer recurrence in b over a-series coefficients:
  //   E_0 = exp(U_0),  E_k = (1/k) Σ_{j=1..k} j U_j E_{k-j}.
  const auto u = columns(f);
  const std::size_t n = u.size();
  std::vector<Series> e(n);
  e[0] = series_exp(u[0]);
  for (std::size_t k = 1; k < n; ++k) {
    Series acc(n, 0.0);
    for (std::size_t j = 1; j <= k; ++j) {
      const Series t = series_mul(u[j], e[k - j]);
      for (std::size_t i = 0; i < n; ++i) acc[i] += static_cast<double>(j) * t[i];
    }
    for (double& x : acc) x /= static_cast<double>(k);
    e[k] = std::move(acc);
  }
  return from_columns(f.base(), f.order(), e);
}

Jet2 reciprocal(const Jet2& f) {
  if (!(std::fabs(f.value()) >= kRecipThreshold)) {
    throw NearSingular("reciprocal of a jet whose value " + std::to_string(f.value()) +
                       " is within 1e-9 of zero");
  }
  // W_0 = 1/U_0,  W_k = -W_0 Σ_{j=1..k} U_j W_{k-j}.
  const auto u = columns(f);
  const std::size_t n = u.size();
  std::vector<Series> w(n);
  w[0] = series_recip(u[0]);
  for (std::size_t k = 1; k < n; ++k) {
    Series acc(n, 0.0);
    for (std::size_t j = 1; j <= k; ++j) {
      const Series t = series_mul(u[j], w[k - j]);
      for (std::size_t i = 0; i < n; ++i) acc[i] += t[i];
    }
    Series neg = series_mul(w[0], acc);
    for (double& x : neg) x = -x;
    w[k] = std::move(neg);
  }
  return from_columns(f.base(), f.order(), w);
}

double extract(const Jet2& f, int m, int n) { return f.derivative(m, n); }

}  // namespace zeroprop
