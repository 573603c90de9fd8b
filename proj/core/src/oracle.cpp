#include "zeroprop/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "zeroprop/errors.hpp"

namespace zeroprop::oracle {
namespace {

using cplx = std::complex<double>;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Central stencils: pairs of (offset in steps, weight), excluding the 1/h^k factor.
std::vector<std::pair<int, double>> stencil(int derivative, int order) {
  if (derivative == 0) return {{0, 1.0}};
  if (order == 2) {
    if (derivative == 1) return {{-1, -0.5}, {1, 0.5}};
    return {{-1, 1.0}, {0, -2.0}, {1, 1.0}};
  }
  if (derivative == 1) return {{-2, 1.0 / 12}, {-1, -8.0 / 12}, {1, 8.0 / 12}, {2, -1.0 / 12}};
  return {{-2, -1.0 / 12}, {-1, 16.0 / 12}, {0, -30.0 / 12}, {1, 16.0 / 12}, {2, -1.0 / 12}};
}

double fd_raw(const ScalarField& f, double h, int order, int m, int n, BasePoint at) {
  double acc = 0.0;
  for (auto [i, wi] : stencil(m, order)) {
    for (auto [j, wj] : stencil(n, order)) acc += wi * wj * f(at.a + i * h, at.b + j * h);
  }
  return acc / (std::pow(h, m) * std::pow(h, n));
}

// Σ_j d_j x^j = (1 - δ) + δ (1 + 2x) Q(-x), built from binary64 coefficients.
std::vector<double> operator_coeffs(const std::vector<double>& q, double delta) {
  std::vector<double> out(q.size() + 1, 0.0);
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double qk = (k % 2 == 0) ? q[k] : -q[k];
    out[k] += delta * qk;
    out[k + 1] += 2.0 * delta * qk;
  }
  out[0] += 1.0 - delta;
  return out;
}

std::vector<double> derivative_coeffs(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
  return d;
}

double horner(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

constexpr double kFdStep = 1e-3;
constexpr int kFdOrder = 4;
constexpr double kContourRadius = 1.5;
constexpr int kContourNodes = 32;

double scaled_diff(double x, double y) { return std::fabs(x - y) / std::max(std::fabs(y), 1.0); }

}  // namespace

void FdScheme::validate() const {
  if (!(step >= 1e-7 && step <= 1e-2)) throw std::invalid_argument("finite-difference step must lie in [1e-7, 1e-2]");
  if (order != 2 && order != 4) throw std::invalid_argument("finite-difference order must be 2 or 4");
}

double rel_diff(double x, double y) {
  return std::fabs(x - y) / std::max(std::fabs(y), std::numeric_limits<double>::min());
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre01(int nodes) {
  if (nodes < 1) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
  const int n = nodes;
  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    // Recompute derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    x[lo] = (1.0 - z) / 2.0;
    x[hi] = (1.0 + z) / 2.0;
    w[lo] = weight / 2.0;
    w[hi] = weight / 2.0;
  }
  return {x, w};
}

double quad_integrate01(const Poly& p, const Poly& q, int nodes) {
  const auto deg = p.degree() + q.degree();
  const auto needed = static_cast<int>((deg + 1) / 2) + 1;
  if (nodes < needed) {
    throw std::invalid_argument("quadrature needs at least " + std::to_string(needed) + " nodes for degree " +
                                std::to_string(deg));
  }
  const auto [x, w] = gauss_legendre01(nodes);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * p.eval(x[i]) * q.eval(x[i]);
  return acc;
}

NumericMoments NumericMoments::of(const MomentTable& mt) {
  return NumericMoments{to_double(mt.dd), to_double(mt.dp), to_double(mt.pd), to_double(mt.pp)};
}

NumericMoments quad_moments(const Poly& p1, const Poly& p2) {
  const auto c1 = p1.to_double();
  const auto c2 = p2.to_double();
  const auto d1 = derivative_coeffs(c1);
  const auto d2 = derivative_coeffs(c2);
  const int nodes = static_cast<int>((p1.degree() + p2.degree() + 1) / 2) + 1;
  const auto [x, w] = gauss_legendre01(nodes);
  NumericMoments m;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v1 = horner(c1, x[i]);
    const double v2 = horner(c2, x[i]);
    const double s1 = horner(d1, x[i]);
    const double s2 = horner(d2, x[i]);
    m.dd += w[i] * s1 * s2;
    m.dp += w[i] * s1 * v2;
    m.pd += w[i] * v1 * s2;
    m.pp += w[i] * v1 * v2;
  }
  return m;
}

template <class T>
T kernel_numeric(const NumericMoments& m, double theta, T a, T b) {
  const T denom = theta * (a + b);
  if (std::abs(denom) < 1e-9) throw NearSingular("kernel evaluated within 1e-9 of the line a + b = 0");
  const auto g = [&](T x, T y) { return m.dd + x * theta * m.pd + y * theta * m.dp + x * y * theta * theta * m.pp; };
  return (g(b, a) - std::exp(-a - b) * g(-a, -b)) / denom;
}

template double kernel_numeric<double>(const NumericMoments&, double, double, double);
template cplx kernel_numeric<cplx>(const NumericMoments&, double, cplx, cplx);

double kernel_numeric(const MomentTable& mt, double theta, double a, double b) {
  return kernel_numeric<double>(NumericMoments::of(mt), theta, a, b);
}

double fd_partial(const ScalarField& f, FdScheme scheme, int m, int n, BasePoint at) {
  scheme.validate();
  if (m < 0 || n < 0 || m > 2 || n > 2) throw std::invalid_argument("fd_partial supports derivative orders 0..2");
  return fd_raw(f, scheme.step, scheme.order, m, n, at);
}

double fd_partial_richardson(const ScalarField& f, FdScheme scheme, int m, int n, BasePoint at) {
  const double coarse = fd_partial(f, scheme, m, n, at);
  const double fine = fd_raw(f, scheme.step / 2.0, scheme.order, m, n, at);
  const double gain = std::pow(2.0, scheme.order);
  return (gain * fine - coarse) / (gain - 1.0);
}

std::vector<std::vector<double>> contour_taylor(const ComplexField& f, BasePoint at, int order, double radius,
                                                int nodes) {
  if (order < 0) throw std::invalid_argument("contour_taylor order must be non-negative");
  if (nodes < 2 * (order + 1) || nodes % 2 != 0) {
    throw std::invalid_argument("contour_taylor needs an even node count of at least 2 (order + 1)");
  }
  const int k_max = order + 1;
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<cplx> ua(static_cast<std::size_t>(nodes)), ub(static_cast<std::size_t>(nodes));
  for (int p = 0; p < nodes; ++p) {
    ua[static_cast<std::size_t>(p)] = std::polar(1.0, two_pi * p / nodes);
    ub[static_cast<std::size_t>(p)] = std::polar(1.0, two_pi * (p + 0.5) / nodes);
  }
  // Inner sums over the a circle for each b node: S[q][m] = Σ_p f(a_p, b_q) ua_p^{-m}.
  std::vector<std::vector<cplx>> inner(static_cast<std::size_t>(nodes), std::vector<cplx>(static_cast<std::size_t>(k_max)));
  for (int q = 0; q < nodes; ++q) {
    const cplx b = at.b + radius * ub[static_cast<std::size_t>(q)];
    for (int p = 0; p < nodes; ++p) {
      const cplx a = at.a + radius * ua[static_cast<std::size_t>(p)];
      const cplx v = f(a, b);
      const cplx conj_u = std::conj(ua[static_cast<std::size_t>(p)]);
      cplx pw = 1.0;
      for (int m = 0; m < k_max; ++m) {
        inner[static_cast<std::size_t>(q)][static_cast<std::size_t>(m)] += v * pw;
        pw *= conj_u;
      }
    }
  }
  std::vector<std::vector<double>> t(static_cast<std::size_t>(k_max), std::vector<double>(static_cast<std::size_t>(k_max)));
  const double norm = 1.0 / (static_cast<double>(nodes) * nodes);
  for (int m = 0; m < k_max; ++m) {
    for (int n = 0; n < k_max; ++n) {
      cplx acc = 0.0;
      for (int q = 0; q < nodes; ++q) {
        acc += inner[static_cast<std::size_t>(q)][static_cast<std::size_t>(m)] *
               std::pow(std::conj(ub[static_cast<std::size_t>(q)]), n);
      }
      t[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)] =
          (acc * norm).real() / (std::pow(radius, m) * std::pow(radius, n));
    }
  }
  return t;
}

double c_by_differences(const SectionFourParams& p) {
  p.validate();
  const Poly p1 = expand_mollifier(p.p1_shape);
  const Poly p2 = expand_mollifier(p.p2_shape);
  const double theta = p.theta;
  const auto field = [theta](NumericMoments m) -> ScalarField {
    return [m, theta](double a, double b) { return kernel_numeric<double>(m, theta, a, b); };
  };
  const BasePoint at{-p.R, -p.R};
  const FdScheme scheme{kFdStep, kFdOrder};
  const double inv_r = std::isinf(p.r) ? 0.0 : 1.0 / p.r;
  double c = field(quad_moments(p1, p1))(at.a, at.b);
  if (inv_r != 0.0) {
    c += inv_r * fd_partial_richardson(field(quad_moments(p2, p1)), scheme, 1, 0, at);
    c += inv_r * fd_partial_richardson(field(quad_moments(p1, p2)), scheme, 0, 1, at);
    c += inv_r * inv_r * fd_partial_richardson(field(quad_moments(p2, p2)), scheme, 1, 1, at);
  }
  return c;
}

double c1_by_contour(const SectionFiveParams& p) {
  p.validate();
  const Poly pp = expand_mollifier(p.p_shape);
  const Poly q = expand_twist(p.q_shape);
  const auto op = operator_coeffs(q.to_double(), p.delta);
  const int order = static_cast<int>(op.size()) - 1;
  const NumericMoments m = quad_moments(pp, pp);
  const double theta = p.theta;
  const ComplexField f = [m, theta](cplx a, cplx b) { return kernel_numeric<cplx>(m, theta, a, b); };
  const int nodes = std::max(kContourNodes, 4 * (order + 1));
  const auto t = contour_taylor(f, BasePoint{-p.R, -p.R}, order, kContourRadius, nodes);
  double total = 0.0;
  for (int j = 0; j <= order; ++j) {
    for (int k = 0; k <= order; ++k) {
      total += op[static_cast<std::size_t>(j)] * op[static_cast<std::size_t>(k)] * factorial(j) * factorial(k) *
               t[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
    }
  }
  return total;
}

bool CrosscheckReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

CrosscheckReport crosscheck_report(const SectionFourParams& p4, const SectionFiveParams& p5,
                                   const CrosscheckOptions& options) {
  CrosscheckReport report;
  const auto add = [&report](std::string name, double computed, double reference, double delta, double tol) {
    report.checks.push_back(CheckResult{std::move(name), computed, reference, delta, tol, delta <= tol});
  };

  const Poly p1 = expand_mollifier(p4.p1_shape);
  const Poly p2 = expand_mollifier(p4.p2_shape);
  const Poly pp = expand_mollifier(p5.p_shape);

  // Exact moments against quadrature.
  const std::vector<std::pair<std::string, std::pair<const Poly*, const Poly*>>> pairs = {
      {"P1,P1", {&p1, &p1}}, {"P2,P1", {&p2, &p1}}, {"P1,P2", {&p1, &p2}}, {"P2,P2", {&p2, &p2}}, {"P,P", {&pp, &pp}}};
  for (const auto& [label, pq] : pairs) {
    const auto exact = NumericMoments::of(moments(*pq.first, *pq.second));
    const auto quad = quad_moments(*pq.first, *pq.second);
    const std::pair<const char*, std::pair<double, double>> entries[] = {
        {"dd", {exact.dd, quad.dd}}, {"dp", {exact.dp, quad.dp}}, {"pd", {exact.pd, quad.pd}}, {"pp", {exact.pp, quad.pp}}};
    for (const auto& [key, v] : entries) {
      add("moment " + label + " " + key, v.first, v.second, scaled_diff(v.first, v.second), 1e-12);
    }
  }

  // Kernel jets against finite differences of the scalar kernel.
  const FdScheme scheme{kFdStep, kFdOrder};
  const auto kernel_checks = [&](const std::string& label, const MomentTable& mt, double theta, double R) {
    Jet2 jet = kernel_jet(KernelSpec{mt, theta, R, 2});
    if (options.jet_perturbation != 0.0) {
      std::vector<double> c(jet.coeffs().begin(), jet.coeffs().end());
      for (double& x : c) x += options.jet_perturbation;
      jet = Jet2(jet.base(), jet.order(), std::move(c));
    }
    const NumericMoments m = NumericMoments::of(mt);
    const ScalarField f = [m, theta](double a, double b) { return kernel_numeric<double>(m, theta, a, b); };
    const BasePoint at{-R, -R};
    const int orders[][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}};
    for (const auto& mn : orders) {
      const double jet_value = extract(jet, mn[0], mn[1]);
      const double fd_value = (mn[0] == 0 && mn[1] == 0) ? f(at.a, at.b) : fd_partial_richardson(f, scheme, mn[0], mn[1], at);
      add("kernel " + label + " d(" + std::to_string(mn[0]) + "," + std::to_string(mn[1]) + ")", jet_value, fd_value,
          scaled_diff(jet_value, fd_value), 1e-6);
    }
  };
  const auto m4 = SectionFourMoments::of(p1, p2);
  kernel_checks("h11", m4.m11, p4.theta, p4.R);
  kernel_checks("h21", m4.m21, p4.theta, p4.R);
  kernel_checks("h12", m4.m12, p4.theta, p4.R);
  kernel_checks("h22", m4.m22, p4.theta, p4.R);
  const MomentTable m5 = moments(pp, pp);
  kernel_checks("hPP", m5, p5.theta, p5.R);

  // Combined constants.
  const double c_exact = c_value(p4);
  const double c_fd = c_by_differences(p4);
  add("c (jets) vs c (finite differences)", c_exact, c_fd, rel_diff(c_exact, c_fd), 1e-5);

  const double c1_exact = c1_value(p5);
  const double c1_ct = c1_by_contour(p5);
  add("c1 (jets) vs c1 (contour)", c1_exact, c1_ct, rel_diff(c1_exact, c1_ct), 1e-4);

  SectionFiveParams flat = p5;
  flat.delta = 0.0;
  const double c1_flat = c1_value(flat);
  const double h_value = kernel_numeric(m5, p5.theta, -p5.R, -p5.R);
  add("c1 at delta=0 vs kernel value", c1_flat, h_value, rel_diff(c1_flat, h_value), 1e-10);

  return report;
}

}  // namespace zeroprop::oracle
