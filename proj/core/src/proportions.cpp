#include "zeroprop/proportions.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

#include "zeroprop/errors.hpp"

namespace zeroprop {
namespace {

constexpr int kSectionFourOrder = 2;

double finite_or_throw(double v, const char* what) {
  if (!std::isfinite(v)) throw NonFinite(std::string(what) + " is not finite");
  return v;
}

void check_theta(double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
}

}  // namespace

void SectionFourParams::validate() const {
  check_theta(theta);
  if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
  if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("R must be positive");
}

void SectionFiveParams::validate() const {
  check_theta(theta);
  if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("R must be positive");
  if (!std::isfinite(delta)) throw std::invalid_argument("delta must be finite");
}

SectionFourMoments SectionFourMoments::of(const Poly& p1, const Poly& p2) {
  return SectionFourMoments{moments(p1, p1), moments(p2, p1), moments(p1, p2), moments(p2, p2)};
}

double c_value(const SectionFourMoments& mt, double theta, double r, double R) {
  const auto jet = [&](const MomentTable& m) {
    return kernel_jet(KernelSpec{m, theta, R, kSectionFourOrder});
  };
  const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
  double c = extract(jet(mt.m11), 0, 0);
  if (inv_r != 0.0) {
    c += inv_r * extract(jet(mt.m21), 1, 0);
    c += inv_r * extract(jet(mt.m12), 0, 1);
    c += inv_r * inv_r * extract(jet(mt.m22), 1, 1);
  }
  return finite_or_throw(c, "c");
}

double c_value(const SectionFourParams& p) {
  p.validate();
  const Poly p1 = expand_mollifier(p.p1_shape);
  const Poly p2 = expand_mollifier(p.p2_shape);
  return c_value(SectionFourMoments::of(p1, p2), p.theta, p.r, p.R);
}

double nu_bound(double c, double R) {
  if (!(c > 0.0)) throw NonPositiveC("c must be positive to take its logarithm");
  if (!(R > 0.0)) throw std::invalid_argument("R must be positive");
  return std::log(c) / (2.0 * R);
}

std::vector<double> twist_operator_coeffs(const Poly& q, double delta) {
  // Q(-x)
  std::vector<double> qm = q.to_double();
  if (qm.empty()) qm.push_back(0.0);
  for (std::size_t k = 1; k < qm.size(); k += 2) qm[k] = -qm[k];
  // (1 + 2x) Q(-x)
  std::vector<double> op(qm.size() + 1, 0.0);
  for (std::size_t k = 0; k < qm.size(); ++k) {
    op[k] += qm[k];
    op[k + 1] += 2.0 * qm[k];
  }
  for (double& c : op) c *= delta;
  op[0] += 1.0 - delta;
  while (op.size() > 1 && op.back() == 0.0) op.pop_back();
  return op;
}

double apply_twist_operator(const Jet2& jet, const std::vector<double>& op) {
  const int deg = static_cast<int>(op.size()) - 1;
  if (deg > jet.order()) {
    throw std::invalid_argument("jet order " + std::to_string(jet.order()) + " is below operator degree " +
                                std::to_string(deg));
  }
  // D(∂_a) D(∂_b) f = Σ_{j,k} d_j d_k ∂_a^j ∂_b^k f, each term a shift to
  // grid entry (j, k) scaled by j! k!.
  double total = 0.0;
  for (int j = 0; j <= deg; ++j) {
    if (op[static_cast<std::size_t>(j)] == 0.0) continue;
    double row = 0.0;
    for (int k = 0; k <= deg; ++k) row += op[static_cast<std::size_t>(k)] * jet.derivative(j, k);
    total += op[static_cast<std::size_t>(j)] * row;
  }
  return total;
}

double c1_value(const MomentTable& mpp, const Poly& q, double theta, double R, double delta) {
  const auto op = twist_operator_coeffs(q, delta);
  const int order = static_cast<int>(q.degree()) + 1;
  const Jet2 h = kernel_jet(KernelSpec{mpp, theta, R, order});
  return finite_or_throw(apply_twist_operator(h, op), "c1");
}

double c1_value(const SectionFiveParams& p) {
  p.validate();
  const Poly pp = expand_mollifier(p.p_shape);
  const Poly q = expand_twist(p.q_shape);
  return c1_value(moments(pp, pp), q, p.theta, p.R, p.delta);
}

double kappa_bound(double c1, double R) {
  if (!(c1 > 0.0)) throw NonPositiveC("c1 must be positive to take its logarithm");
  if (!(R > 0.0)) throw std::invalid_argument("R must be positive");
  return 1.0 - std::log(c1) / R;
}

ProportionPair unconditional_bounds(double kappa, double nu) {
  return ProportionPair{0.5 + kappa / 2.0 - nu, kappa - 2.0 * nu};
}

ProportionPair grh_bounds(double nu) { return ProportionPair{1.0 - nu, 1.0 - 2.0 * nu}; }

BoundReport assemble_report(double c, double c1, const SectionFourParams& p4, const SectionFiveParams& p5) {
  BoundReport rep;
  rep.section4 = p4;
  rep.section5 = p5;
  rep.c = c;
  rep.c1 = c1;
  rep.nu = nu_bound(c, p4.R);
  rep.kappa = kappa_bound(c1, p5.R);
  const auto uncond = unconditional_bounds(rep.kappa, rep.nu);
  const auto grh = grh_bounds(rep.nu);
  rep.d_uncond = uncond.distinct;
  rep.s_uncond = uncond.simple;
  rep.d_grh = grh.distinct;
  rep.s_grh = grh.simple;
  return rep;
}

BoundReport full_report(const SectionFourParams& p4, const SectionFiveParams& p5) {
  // The two halves share no parameters.
  auto c1_future = std::async(std::launch::async, [&p5] { return c1_value(p5); });
  const double c = c_value(p4);
  return assemble_report(c, c1_future.get(), p4, p5);
}

}  // namespace zeroprop
