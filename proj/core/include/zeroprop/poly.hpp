#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "zeroprop/rational.hpp"

namespace zeroprop {

/// Univariate polynomial with exact rational coefficients, index k holding the
/// coefficient of x^k. Always canonical: no trailing zero coefficients, and the
/// zero polynomial has an empty coefficient list.
class Poly {
 public:
  static constexpr std::size_t kMaxDegree = 64;

  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs);
  Poly(std::initializer_list<Rational> coeffs);

  static Poly constant(const Rational& c);
  static Poly monomial(std::size_t k, const Rational& c = 1);
  /// Coefficients parsed with parse_decimal, lowest power first.
  static Poly from_decimals(const std::vector<std::string>& coeffs);

  const std::vector<Rational>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// Degree; 0 for the zero polynomial.
  std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  Rational coeff(std::size_t k) const;

  Rational operator()(const Rational& x) const;
  /// Horner evaluation of the binary64 images of the coefficients.
  double eval(double x) const;
  std::vector<double> to_double() const;

  friend Poly operator+(const Poly& p, const Poly& q);
  friend Poly operator-(const Poly& p, const Poly& q);
  friend Poly operator*(const Poly& p, const Poly& q);
  friend Poly operator*(const Rational& s, const Poly& p);
  friend bool operator==(const Poly& p, const Poly& q) { return p.coeffs_ == q.coeffs_; }

  std::string to_string() const;

 private:
  void canonicalize();

  std::vector<Rational> coeffs_;
};

Rational poly_eval(const Poly& p, const Rational& x);
Poly poly_derivative(const Poly& p);
/// p(1 - x).
Poly poly_reflect(const Poly& p);
/// Exact ∫₀¹ p(t) q(t) dt = Σ p_j q_k / (j + k + 1).
Rational integrate01_product(const Poly& p, const Poly& q);

/// P(x) = x + Σ_j c_j x^j (1 - x), j = 1..m. The basis forces P(0)=0, P(1)=1.
struct MollifierShape {
  std::vector<Rational> coeffs;
};

/// Q(x) = 1 + q_0 x + Σ_k q_k I_k(x), I_k(x) = ∫₀ˣ t^k (1-t)^k dt.
/// The basis forces Q(0)=1 and Q'(x) = Q'(1-x).
struct TwistShape {
  Rational linear_coeff;
  std::vector<Rational> sym_coeffs;
};

/// I_k(x) = ∫₀ˣ t^k (1-t)^k dt.
Poly symmetric_primitive(std::size_t k);

Poly expand_mollifier(const MollifierShape& shape);
Poly expand_twist(const TwistShape& shape);

/// Throws ConstraintViolation naming "P(0)=0" or "P(1)=1".
void validate_mollifier(const Poly& p);
/// Throws ConstraintViolation naming "Q(0)=1" or "Q'(x)=Q'(1-x)".
void validate_twist(const Poly& q);

/// Inverse of expand_mollifier for a validated polynomial.
MollifierShape mollifier_shape_of(const Poly& p);
/// Inverse of expand_twist for a validated polynomial.
TwistShape twist_shape_of(const Poly& q);

}  // namespace zeroprop
