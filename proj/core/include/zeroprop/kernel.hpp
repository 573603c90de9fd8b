#pragma once

#include "zeroprop/jet.hpp"
#include "zeroprop/poly.hpp"
#include "zeroprop/rational.hpp"

namespace zeroprop {

/// The four bilinear pieces of
///   g(a, b) = ∫₀¹ (P₁'(t) + aθ P₁(t)) (P₂'(t) + bθ P₂(t)) dt
///           = dd + aθ pd + bθ dp + abθ² pp.
struct MomentTable {
  Rational dd;  // ∫ P₁' P₂'
  Rational dp;  // ∫ P₁' P₂
  Rational pd;  // ∫ P₁  P₂'
  Rational pp;  // ∫ P₁  P₂

  /// Moments of the swapped pair (P₂, P₁).
  MomentTable transposed() const { return MomentTable{dd, pd, dp, pp}; }
  friend bool operator==(const MomentTable&, const MomentTable&) = default;
};

MomentTable moments(const Poly& p1, const Poly& p2);

struct KernelSpec {
  MomentTable moments;
  double theta = 1.0;
  double base_R = 0.0;  // evaluation at a0 = b0 = -R
  int order = 2;

  /// Throws std::invalid_argument unless theta > 0, base_R >= 1e-6, order >= 0.
  void validate() const;
};

/// g realized as a jet (exact: bidegree (1,1)). `swap` evaluates g(b, a),
/// `negate` evaluates g(-a, -b); both together give g(-b, -a).
Jet2 g_jet(const MomentTable& mt, double theta, BasePoint base, int order, bool swap, bool negate);

/// g(b, a) - e^{-a-b} g(-a, -b); vanishes on the line a + b = 0.
Jet2 kernel_numerator_jet(const MomentTable& mt, double theta, BasePoint base, int order);

/// h(a, b) = [g(b, a) - e^{-a-b} g(-a, -b)] / (θ (a + b)) at an arbitrary
/// base point, evaluated through the equivalent entire form
/// (pd + dp) + g(-a, -b) (1 - e^{-a-b}) / (θ (a + b)), whose last factor has
/// positive-series Taylor coefficients. Defined on the line a + b = 0 too.
Jet2 kernel_jet_at(const MomentTable& mt, double theta, BasePoint base, int order);

/// The same kernel as numerator * reciprocal(θ (a + b)). Loses roughly
/// (1 / 2R)^(2 order) relative accuracy near the removable singularity; kept
/// as an independent construction for comparison.
/// Throws NearSingular when |θ(a0 + b0)| < 1e-9.
Jet2 kernel_jet_by_division(const MomentTable& mt, double theta, BasePoint base, int order);

/// h at a0 = b0 = -R.
Jet2 kernel_jet(const KernelSpec& spec);

}  // namespace zeroprop
