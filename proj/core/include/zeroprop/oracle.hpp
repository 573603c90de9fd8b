#pragma once

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "zeroprop/jet.hpp"
#include "zeroprop/kernel.hpp"
#include "zeroprop/poly.hpp"
#include "zeroprop/proportions.hpp"

// Numeric verification path. Nothing here touches Jet2 arithmetic; the only
// shared code with the exact path is Poly evaluation.
namespace zeroprop::oracle {

struct FdScheme {
  double step = 1e-4;
  int order = 2;  // 2 or 4: accuracy order of the central stencil

  /// Throws std::invalid_argument unless step ∈ [1e-7, 1e-2] and order ∈ {2, 4}.
  void validate() const;
};

/// Gauss-Legendre nodes and weights mapped to [0, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre01(int nodes);

/// ∫₀¹ p q via an n-node Gauss-Legendre rule on binary64 coefficients.
/// Requires nodes >= ceil((deg p + deg q) / 2) + 1.
double quad_integrate01(const Poly& p, const Poly& q, int nodes);

struct NumericMoments {
  double dd = 0.0;
  double dp = 0.0;
  double pd = 0.0;
  double pp = 0.0;

  static NumericMoments of(const MomentTable& mt);
};

/// Moments of (p1, p2) by quadrature at the minimal exact node count.
NumericMoments quad_moments(const Poly& p1, const Poly& p2);

/// Direct scalar h(a, b); T is double or std::complex<double>.
/// Throws NearSingular when |θ(a + b)| < 1e-9.
template <class T>
T kernel_numeric(const NumericMoments& m, double theta, T a, T b);

double kernel_numeric(const MomentTable& mt, double theta, double a, double b);

using ScalarField = std::function<double(double, double)>;
using ComplexField = std::function<std::complex<double>(std::complex<double>, std::complex<double>)>;

/// Central-difference estimate of ∂_a^m ∂_b^n f, with m, n <= 2.
double fd_partial(const ScalarField& f, FdScheme scheme, int m, int n, BasePoint at);

/// One Richardson step over steps h and h/2.
double fd_partial_richardson(const ScalarField& f, FdScheme scheme, int m, int n, BasePoint at);

/// Normalized Taylor grid t[m][n] = ∂_a^m ∂_b^n f / (m! n!) for m, n <= order,
/// recovered with the trapezoidal rule on the torus |a - a0| = |b - b0| = radius
/// (the b circle is offset by half a node). Requires f analytic on the closed
/// bidisk.
std::vector<std::vector<double>> contour_taylor(const ComplexField& f, BasePoint at, int order, double radius,
                                                int nodes);

/// c recomputed with finite differences of kernel_numeric on quadrature moments.
double c_by_differences(const SectionFourParams& p);

/// c₁ recomputed from contour Taylor coefficients of kernel_numeric on
/// quadrature moments.
double c1_by_contour(const SectionFiveParams& p);

struct CheckResult {
  std::string name;
  double computed = 0.0;   // exact/jet path
  double reference = 0.0;  // oracle path
  double rel_delta = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CrosscheckReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

struct CrosscheckOptions {
  /// Test hook: added to the jet-path kernel entries before comparison.
  double jet_perturbation = 0.0;
};

CrosscheckReport crosscheck_report(const SectionFourParams& p4, const SectionFiveParams& p5,
                                   const CrosscheckOptions& options = {});

/// |x - y| / max(|y|, tiny).
double rel_diff(double x, double y);

}  // namespace zeroprop::oracle
