#pragma once

#include <vector>

#include "zeroprop/kernel.hpp"
#include "zeroprop/poly.hpp"

namespace zeroprop {

/// Mollifier pair (P₁, P₂) and the multiplicity-detector weight λ = 1/(r log q)
/// for the right-half bound. r may be +infinity (drops the derivative terms).
struct SectionFourParams {
  MollifierShape p1_shape;
  MollifierShape p2_shape;
  double theta = 1.0;
  double r = 1.0;
  double R = 1.0;

  void validate() const;
};

/// Mollifier P, twist polynomial Q and mixing weight δ for the ξ' bound.
struct SectionFiveParams {
  MollifierShape p_shape;
  TwistShape q_shape;
  double theta = 1.0;
  double R = 1.0;
  double delta = 0.0;

  void validate() const;
};

struct BoundReport {
  double c = 0.0;
  double nu = 0.0;
  double c1 = 0.0;
  double kappa = 0.0;
  double d_uncond = 0.0;
  double s_uncond = 0.0;
  double d_grh = 0.0;
  double s_grh = 0.0;
  SectionFourParams section4;
  SectionFiveParams section5;
};

struct ProportionPair {
  double distinct = 0.0;
  double simple = 0.0;
};

/// Moment tables for the pairs (P₁,P₁), (P₂,P₁), (P₁,P₂), (P₂,P₂).
struct SectionFourMoments {
  MomentTable m11;
  MomentTable m21;
  MomentTable m12;
  MomentTable m22;

  static SectionFourMoments of(const Poly& p1, const Poly& p2);
};

/// c = h₁₁ + (1/r) ∂_a h₂₁ + (1/r) ∂_b h₁₂ + (1/r²) ∂_a∂_b h₂₂ at a = b = -R.
double c_value(const SectionFourMoments& mt, double theta, double r, double R);
double c_value(const SectionFourParams& p);

/// ln(c) / (2R). Throws NonPositiveC when c <= 0.
double nu_bound(double c, double R);

/// Coefficients d_j of D(x) = (1 - δ) + δ (1 + 2x) Q(-x), so that the operator
/// applied in one variable is Σ_j d_j ∂^j.
std::vector<double> twist_operator_coeffs(const Poly& q, double delta);

/// Applies D(∂_a) D(∂_b) to the jet and returns the value at the base point.
/// Requires jet order >= deg D.
double apply_twist_operator(const Jet2& jet, const std::vector<double>& op);

/// c₁ from the (P,P) moments and the expanded twist polynomial.
double c1_value(const MomentTable& mpp, const Poly& q, double theta, double R, double delta);
double c1_value(const SectionFiveParams& p);

/// 1 - ln(c₁)/R. Throws NonPositiveC when c₁ <= 0.
double kappa_bound(double c1, double R);

/// d = 1/2 + κ/2 - ν, s = κ - 2ν.
ProportionPair unconditional_bounds(double kappa, double nu);
/// d = 1 - ν, s = 1 - 2ν.
ProportionPair grh_bounds(double nu);

/// Combines precomputed c and c₁ (the parameter records are carried along).
BoundReport assemble_report(double c, double c1, const SectionFourParams& p4, const SectionFiveParams& p5);
BoundReport full_report(const SectionFourParams& p4, const SectionFiveParams& p5);

}  // namespace zeroprop
