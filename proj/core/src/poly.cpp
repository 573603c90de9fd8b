#include "zeroprop/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "zeroprop/errors.hpp"

namespace zeroprop {

Poly::Poly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { canonicalize(); }

Poly::Poly(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) { canonicalize(); }

void Poly::canonicalize() {
  for (auto& c : coeffs_) c.canonicalize();
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  if (coeffs_.size() > kMaxDegree + 1) {
    throw std::length_error("polynomial degree " + std::to_string(coeffs_.size() - 1) +
                            " exceeds the supported maximum of " + std::to_string(kMaxDegree));
  }
}

Poly Poly::constant(const Rational& c) { return Poly(std::vector<Rational>{c}); }

Poly Poly::monomial(std::size_t k, const Rational& c) {
  std::vector<Rational> v(k + 1);
  v[k] = c;
  return Poly(std::move(v));
}

Poly Poly::from_decimals(const std::vector<std::string>& coeffs) {
  std::vector<Rational> v;
  v.reserve(coeffs.size());
  for (const auto& s : coeffs) v.push_back(parse_decimal(s));
  return Poly(std::move(v));
}

Rational Poly::coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }

Rational Poly::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double Poly::eval(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + zeroprop::to_double(*it);
  return acc;
}

std::vector<double> Poly::to_double() const {
  std::vector<double> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(zeroprop::to_double(c));
  return out;
}

Poly operator+(const Poly& p, const Poly& q) {
  std::vector<Rational> v(std::max(p.coeffs_.size(), q.coeffs_.size()));
  for (std::size_t k = 0; k < p.coeffs_.size(); ++k) v[k] += p.coeffs_[k];
  for (std::size_t k = 0; k < q.coeffs_.size(); ++k) v[k] += q.coeffs_[k];
  return Poly(std::move(v));
}

Poly operator-(const Poly& p, const Poly& q) { return p + Rational(-1) * q; }

Poly operator*(const Poly& p, const Poly& q) {
  if (p.is_zero() || q.is_zero()) return Poly{};
  std::vector<Rational> v(p.coeffs_.size() + q.coeffs_.size() - 1);
  for (std::size_t j = 0; j < p.coeffs_.size(); ++j) {
    for (std::size_t k = 0; k < q.coeffs_.size(); ++k) v[j + k] += p.coeffs_[j] * q.coeffs_[k];
  }
  return Poly(std::move(v));
}

Poly operator*(const Rational& s, const Poly& p) {
  std::vector<Rational> v(p.coeffs_);
  for (auto& c : v) c *= s;
  return Poly(std::move(v));
}

std::string Poly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == 0) continue;
    if (!first) os << " + ";
    os << "(" << coeffs_[k].get_str() << ")";
    if (k >= 1) os << "x";
    if (k >= 2) os << "^" << k;
    first = false;
  }
  return os.str();
}

Rational poly_eval(const Poly& p, const Rational& x) { return p(x); }

Poly poly_derivative(const Poly& p) {
  const auto& c = p.coeffs();
  if (c.size() <= 1) return Poly{};
  std::vector<Rational> v(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) v[k - 1] = c[k] * static_cast<unsigned long>(k);
  return Poly(std::move(v));
}

Poly poly_reflect(const Poly& p) {
  // Horner in the variable (1 - x).
  const Poly one_minus_x{Rational(1), Rational(-1)};
  Poly acc;
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * one_minus_x + Poly::constant(*it);
  return acc;
}

Rational integrate01_product(const Poly& p, const Poly& q) {
  Rational acc = 0;
  const auto& pc = p.coeffs();
  const auto& qc = q.coeffs();
  for (std::size_t j = 0; j < pc.size(); ++j) {
    for (std::size_t k = 0; k < qc.size(); ++k) {
      acc += pc[j] * qc[k] / Rational(static_cast<unsigned long>(j + k + 1));
    }
  }
  acc.canonicalize();
  return acc;
}

Poly symmetric_primitive(std::size_t k) {
  // t^k (1-t)^k = Σ_i C(k,i) (-1)^i t^{k+i}
  std::vector<Rational> v(2 * k + 2);
  mpz_class binom = 1;
  for (std::size_t i = 0; i <= k; ++i) {
    Rational term(binom, static_cast<unsigned long>(k + i + 1));
    v[k + i + 1] = (i % 2 == 0) ? term : Rational(-term);
    binom = binom * static_cast<unsigned long>(k - i) / static_cast<unsigned long>(i + 1);
  }
  return Poly(std::move(v));
}

Poly expand_mollifier(const MollifierShape& shape) {
  std::vector<Rational> v(shape.coeffs.size() + 2);
  v[1] = 1;
  for (std::size_t j = 1; j <= shape.coeffs.size(); ++j) {
    v[j] += shape.coeffs[j - 1];
    v[j + 1] -= shape.coeffs[j - 1];
  }
  Poly p(std::move(v));
  if (p(0) != 0 || p(1) != 1) throw std::logic_error("mollifier basis produced P(0)!=0 or P(1)!=1");
  return p;
}

Poly expand_twist(const TwistShape& shape) {
  Poly q{Rational(1), shape.linear_coeff};
  for (std::size_t k = 1; k <= shape.sym_coeffs.size(); ++k) {
    q = q + shape.sym_coeffs[k - 1] * symmetric_primitive(k);
  }
  validate_twist(q);
  return q;
}

void validate_mollifier(const Poly& p) {
  if (p(0) != 0) {
    throw ConstraintViolation("mollifier polynomial violates P(0)=0 (P(0) = " + p(0).get_str() + ")");
  }
  if (p(1) != 1) {
    throw ConstraintViolation("mollifier polynomial violates P(1)=1 (P(1) = " + p(1).get_str() + ")");
  }
}

void validate_twist(const Poly& q) {
  if (q(0) != 1) {
    throw ConstraintViolation("twist polynomial violates Q(0)=1 (Q(0) = " + q(0).get_str() + ")");
  }
  const Poly dq = poly_derivative(q);
  if (!(dq - poly_reflect(dq)).is_zero()) {
    throw ConstraintViolation("twist polynomial violates Q'(x)=Q'(1-x)");
  }
}

MollifierShape mollifier_shape_of(const Poly& p) {
  validate_mollifier(p);
  // S(x) = (P(x) - x) / (x (1 - x))
  Poly rest = p - Poly::monomial(1);
  std::vector<Rational> over_x;
  if (!rest.is_zero()) over_x.assign(rest.coeffs().begin() + 1, rest.coeffs().end());
  // Synthetic division by (x - 1); the remainder is P(1) - 1 = 0.
  MollifierShape shape;
  if (over_x.empty()) return shape;
  const std::size_t n = over_x.size();
  std::vector<Rational> quotient(n - 1);
  Rational carry = 0;
  for (std::size_t i = n; i-- > 1;) {
    carry = over_x[i] + carry;
    quotient[i - 1] = carry;
  }
  // divided by (x - 1); flip sign for (1 - x)
  for (auto& c : quotient) {
    c = -c;
    c.canonicalize();
  }
  shape.coeffs = std::move(quotient);
  while (!shape.coeffs.empty() && shape.coeffs.back() == 0) shape.coeffs.pop_back();
  return shape;
}

TwistShape twist_shape_of(const Poly& q) {
  validate_twist(q);
  Poly rest = poly_derivative(q);
  TwistShape shape;
  if (rest.is_zero()) return shape;
  const std::size_t top = rest.degree() / 2;
  const Poly u{Rational(0), Rational(1), Rational(-1)};
  std::vector<Poly> u_pow{Poly::constant(1)};
  for (std::size_t k = 1; k <= top; ++k) u_pow.push_back(u_pow.back() * u);
  std::vector<Rational> c(top + 1);
  for (std::size_t k = top + 1; k-- > 0;) {
    c[k] = rest.coeff(2 * k);
    if (k % 2 == 1) c[k] = -c[k];
    rest = rest - c[k] * u_pow[k];
  }
  if (!rest.is_zero()) throw std::logic_error("symmetric derivative did not decompose in powers of x(1-x)");
  shape.linear_coeff = c[0];
  shape.sym_coeffs.assign(c.begin() + 1, c.end());
  while (!shape.sym_coeffs.empty() && shape.sym_coeffs.back() == 0) shape.sym_coeffs.pop_back();
  return shape;
}

}  // namespace zeroprop
