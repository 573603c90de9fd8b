#pragma once

#include <span>
#include <vector>

namespace zeroprop {

struct BasePoint {
  double a = 0.0;
  double b = 0.0;
  friend bool operator==(const BasePoint&, const BasePoint&) = default;
};

/// Truncated bivariate Taylor expansion at (a0, b0). Entry (m, n) holds
/// ∂_a^m ∂_b^n f(a0, b0) / (m! n!) for 0 <= m, n <= order (rectangular
/// truncation, so each direction keeps `order` derivatives independently).
class Jet2 {
 public:
  /// Throws std::invalid_argument on a size mismatch and NonFinite if any
  /// entry is NaN or infinite.
  Jet2(BasePoint base, int order, std::vector<double> coeffs);

  static Jet2 constant(double v, BasePoint base, int order);
  static Jet2 var_a(BasePoint base, int order);
  static Jet2 var_b(BasePoint base, int order);

  BasePoint base() const { return base_; }
  int order() const { return order_; }
  int stride() const { return order_ + 1; }

  double coeff(int m, int n) const { return coeffs_[static_cast<std::size_t>(m * stride() + n)]; }
  std::span<const double> coeffs() const { return coeffs_; }
  double value() const { return coeffs_.front(); }

  /// ∂_a^m ∂_b^n f at the base point.
  double derivative(int m, int n) const;

  /// g(a, b) = f(b, a): swaps the grid axes and the base coordinates.
  Jet2 transposed() const;
  /// Re-truncates to `order`; entries beyond the current order are zero-filled.
  Jet2 truncated(int order) const;

 private:
  BasePoint base_;
  int order_;
  std::vector<double> coeffs_;
};

Jet2 operator+(const Jet2& f, const Jet2& g);
Jet2 operator-(const Jet2& f, const Jet2& g);
Jet2 operator-(const Jet2& f);
Jet2 operator*(const Jet2& f, const Jet2& g);
Jet2 operator*(double s, const Jet2& f);
Jet2 operator*(const Jet2& f, double s);

Jet2 exp(const Jet2& f);
/// Throws NearSingular if |f(a0, b0)| < kRecipThreshold.
Jet2 reciprocal(const Jet2& f);

inline constexpr double kRecipThreshold = 1e-9;

/// ∂_a^m ∂_b^n f(a0, b0); m and n must not exceed the order.
double extract(const Jet2& f, int m, int n);

}  // namespace zeroprop
