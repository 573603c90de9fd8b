#include "zeroprop/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>

#include "zeroprop/errors.hpp"

namespace zeroprop {
namespace {

constexpr double kSpreadTolerance = 1e-10;

const std::vector<std::string>& scalar_names(Target t) {
  static const std::vector<std::string> nu{"r", "R"};
  static const std::vector<std::string> kappa{"R", "delta"};
  return t == Target::minimize_nu ? nu : kappa;
}

void pad(std::vector<Rational>& v, int length) {
  if (length >= 0 && v.size() < static_cast<std::size_t>(length)) v.resize(static_cast<std::size_t>(length));
}

// Maps between the flat search vector and the parameter records, and caches
// the exact moments when the shapes are frozen.
class Problem {
 public:
  explicit Problem(const SearchSpec& spec) : spec_(spec), p4_(spec.section4), p5_(spec.section5) {
    if (spec.shape_degrees.size() >= 2) {
      if (spec.target == Target::minimize_nu) {
        pad(p4_.p1_shape.coeffs, spec.shape_degrees[0]);
        pad(p4_.p2_shape.coeffs, spec.shape_degrees[1]);
      } else {
        pad(p5_.p_shape.coeffs, spec.shape_degrees[0]);
        pad(p5_.q_shape.sym_coeffs, spec.shape_degrees[1]);
      }
    }
    for (const auto& name : scalar_names(spec.target)) {
      if (auto it = spec.bounds.find(name); it != spec.bounds.end()) {
        names_.push_back(name);
        bounds_.push_back(it->second);
      }
    }
    if (!spec.free_shapes) {
      if (spec.target == Target::minimize_nu) {
        m4_ = SectionFourMoments::of(expand_mollifier(p4_.p1_shape), expand_mollifier(p4_.p2_shape));
      } else {
        const Poly p = expand_mollifier(p5_.p_shape);
        m5_ = moments(p, p);
        q_ = expand_twist(p5_.q_shape);
      }
    }
  }

  std::size_t scalar_count() const { return names_.size(); }
  const std::vector<Interval>& bounds() const { return bounds_; }

  std::vector<double> initial() const {
    std::vector<double> x;
    for (const auto& name : names_) x.push_back(scalar(name));
    if (spec_.free_shapes) {
      const auto push = [&x](const std::vector<Rational>& v) {
        for (const auto& c : v) x.push_back(to_double(c));
      };
      if (spec_.target == Target::minimize_nu) {
        push(p4_.p1_shape.coeffs);
        push(p4_.p2_shape.coeffs);
      } else {
        push(p5_.p_shape.coeffs);
        x.push_back(to_double(p5_.q_shape.linear_coeff));
        push(p5_.q_shape.sym_coeffs);
      }
    }
    return x;
  }

  void decode(const std::vector<double>& x, SectionFourParams& p4, SectionFiveParams& p5) const {
    p4 = p4_;
    p5 = p5_;
    std::size_t i = 0;
    for (const auto& name : names_) {
      const double v = x[i++];
      if (name == "r") p4.r = v;
      if (name == "R") (spec_.target == Target::minimize_nu ? p4.R : p5.R) = v;
      if (name == "delta") p5.delta = v;
    }
    if (!spec_.free_shapes) return;
    const auto pull = [&x, &i](std::vector<Rational>& v) {
      for (auto& c : v) c = from_double(x[i++]);
    };
    if (spec_.target == Target::minimize_nu) {
      pull(p4.p1_shape.coeffs);
      pull(p4.p2_shape.coeffs);
    } else {
      pull(p5.p_shape.coeffs);
      p5.q_shape.linear_coeff = from_double(x[i++]);
      pull(p5.q_shape.sym_coeffs);
    }
  }

  /// Objective in its natural orientation (ν or κ).
  double objective(const std::vector<double>& x) const {
    SectionFourParams p4;
    SectionFiveParams p5;
    decode(x, p4, p5);
    if (spec_.free_shapes) return evaluate_objective(spec_.target, p4, p5);
    if (spec_.target == Target::minimize_nu) {
      p4.validate();
      return nu_bound(c_value(*m4_, p4.theta, p4.r, p4.R), p4.R);
    }
    p5.validate();
    return kappa_bound(c1_value(*m5_, *q_, p5.theta, p5.R, p5.delta), p5.R);
  }

  /// Distance outside the scalar box (0 when feasible).
  double violation(const std::vector<double>& x) const {
    double d2 = 0.0;
    for (std::size_t i = 0; i < bounds_.size(); ++i) {
      const double over = std::max({bounds_[i].lo - x[i], x[i] - bounds_[i].hi, 0.0});
      d2 += over * over;
    }
    return std::sqrt(d2);
  }

  void clamp(std::vector<double>& x) const {
    for (std::size_t i = 0; i < bounds_.size(); ++i) x[i] = std::clamp(x[i], bounds_[i].lo, bounds_[i].hi);
  }

 private:
  double scalar(const std::string& name) const {
    if (name == "r") return p4_.r;
    if (name == "delta") return p5_.delta;
    return spec_.target == Target::minimize_nu ? p4_.R : p5_.R;
  }

  const SearchSpec& spec_;
  SectionFourParams p4_;
  SectionFiveParams p5_;
  std::vector<std::string> names_;
  std::vector<Interval> bounds_;
  std::optional<SectionFourMoments> m4_;
  std::optional<MomentTable> m5_;
  std::optional<Poly> q_;
};

// Bookkeeping shared by all runs: budget, penalty baseline, incumbent, trace.
// Costs are minimized; cost = ν or -κ.
class Evaluator {
 public:
  Evaluator(const Problem& problem, Target target, int budget)
      : problem_(problem), sign_(target == Target::minimize_nu ? 1.0 : -1.0), budget_(budget) {}

  bool exhausted() const { return used_ >= budget_; }
  int used() const { return used_; }

  double cost(const std::vector<double>& x) {
    ++used_;
    const double outside = problem_.violation(x);
    if (outside > 0.0) return worst_ + outside;
    double obj = 0.0;
    try {
      obj = problem_.objective(x);
    } catch (const Error&) {
      return worst_ + 1.0;
    } catch (const std::invalid_argument&) {
      return worst_ + 1.0;
    }
    if (!std::isfinite(obj)) return worst_ + 1.0;
    const double c = sign_ * obj;
    worst_ = have_best_ ? std::max(worst_, c) : c;
    if (!have_best_ || c < best_cost_) {
      have_best_ = true;
      best_cost_ = c;
      best_x_ = x;
      trace_.push_back(TraceEntry{used_, obj});
    }
    return c;
  }

  bool have_best() const { return have_best_; }
  const std::vector<double>& best_x() const { return best_x_; }
  double best_objective() const { return sign_ * best_cost_; }
  const std::vector<TraceEntry>& trace() const { return trace_; }

 private:
  const Problem& problem_;
  double sign_;
  int budget_;
  int used_ = 0;
  bool have_best_ = false;
  double best_cost_ = 0.0;
  double worst_ = 0.0;
  std::vector<double> best_x_;
  std::vector<TraceEntry> trace_;
};

void nelder_mead(Evaluator& ev, const Problem& problem, std::vector<double> x0, double first_cost, int cap) {
  const std::size_t n = x0.size();
  if (n == 0) return;
  const auto budget_left = [&] { return ev.used() < cap && !ev.exhausted(); };

  std::vector<std::vector<double>> simplex{x0};
  std::vector<double> f{first_cost};
  for (std::size_t i = 0; i < n && budget_left(); ++i) {
    std::vector<double> x = x0;
    double step = x[i] != 0.0 ? 0.05 * x[i] : 0.00025;
    if (i < problem.bounds().size()) {
      const auto& b = problem.bounds()[i];
      if (x[i] + step > b.hi || x[i] + step < b.lo) step = -step;
    }
    x[i] += step;
    f.push_back(ev.cost(x));
    simplex.push_back(std::move(x));
  }
  if (simplex.size() < n + 1) return;

  std::vector<std::size_t> idx(n + 1);
  const auto combine = [n](const std::vector<double>& c, const std::vector<double>& x, double t) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = c[k] + t * (x[k] - c[k]);
    return out;
  };

  while (budget_left()) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&f](std::size_t i, std::size_t j) { return f[i] < f[j]; });
    const std::size_t best = idx.front();
    const std::size_t worst = idx.back();
    const std::size_t second = idx[n - 1];
    if (std::fabs(f[worst] - f[best]) < kSpreadTolerance) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n + 1; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);
    }

    auto xr = combine(centroid, simplex[worst], -1.0);
    const double fr = ev.cost(xr);
    if (fr < f[best]) {
      if (!budget_left()) {
        simplex[worst] = std::move(xr);
        f[worst] = fr;
        break;
      }
      auto xe = combine(centroid, simplex[worst], -2.0);
      const double fe = ev.cost(xe);
      if (fe < fr) {
        simplex[worst] = std::move(xe);
        f[worst] = fe;
      } else {
        simplex[worst] = std::move(xr);
        f[worst] = fr;
      }
      continue;
    }
    if (fr < f[second]) {
      simplex[worst] = std::move(xr);
      f[worst] = fr;
      continue;
    }
    if (!budget_left()) break;
    const bool outside = fr < f[worst];
    auto xc = outside ? combine(centroid, xr, 0.5) : combine(centroid, simplex[worst], 0.5);
    const double fc = ev.cost(xc);
    if (fc < (outside ? fr : f[worst])) {
      simplex[worst] = std::move(xc);
      f[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < n + 1 && budget_left(); ++i) {
      if (i == best) continue;
      simplex[i] = combine(simplex[best], simplex[i], 0.5);
      f[i] = ev.cost(simplex[i]);
    }
  }
}

SearchResult finish(const Evaluator& ev, const Problem& problem) {
  if (!ev.have_best()) throw EvaluationFailure("no feasible point could be evaluated");
  SearchResult result;
  problem.decode(ev.best_x(), result.section4, result.section5);
  result.best_objective = ev.best_objective();
  result.evaluations_used = ev.used();
  result.trace = ev.trace();
  return result;
}

}  // namespace

std::string to_string(Target t) { return t == Target::minimize_nu ? "minimize_nu" : "maximize_kappa"; }

Target parse_target(const std::string& name) {
  if (name == "minimize_nu") return Target::minimize_nu;
  if (name == "maximize_kappa") return Target::maximize_kappa;
  throw std::invalid_argument("unknown search target '" + name + "' (expected minimize_nu or maximize_kappa)");
}

void SearchSpec::validate() const {
  if (budget < 1) throw std::invalid_argument("search budget must be at least 1");
  if (restarts < 0) throw std::invalid_argument("search restarts must be non-negative");
  const auto& allowed = scalar_names(target);
  for (const auto& [name, iv] : bounds) {
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
      throw std::invalid_argument("parameter '" + name + "' cannot be searched for target " + to_string(target));
    }
    if (!(iv.lo <= iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      throw std::invalid_argument("bounds for '" + name + "' are empty or not finite");
    }
  }
  if (target == Target::minimize_nu) {
    section4.validate();
  } else {
    section5.validate();
  }
  const auto check_inside = [this](const std::string& name, double v) {
    if (auto it = bounds.find(name); it != bounds.end() && (v < it->second.lo || v > it->second.hi)) {
      throw std::invalid_argument("initial " + name + " lies outside its bounds");
    }
  };
  if (target == Target::minimize_nu) {
    check_inside("r", section4.r);
    check_inside("R", section4.R);
  } else {
    check_inside("R", section5.R);
    check_inside("delta", section5.delta);
  }
}

double evaluate_objective(Target target, const SectionFourParams& p4, const SectionFiveParams& p5) {
  if (target == Target::minimize_nu) return nu_bound(c_value(p4), p4.R);
  return kappa_bound(c1_value(p5), p5.R);
}

SearchResult optimize(const SearchSpec& spec) {
  spec.validate();
  const Problem problem(spec);
  Evaluator ev(problem, spec.target, spec.budget);

  const auto x0 = problem.initial();
  try {
    (void)problem.objective(x0);
  } catch (const std::exception& e) {
    throw EvaluationFailure(std::string("objective fails at the initial point: ") + e.what());
  }
  const double f0 = ev.cost(x0);

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  const int runs = spec.restarts + 1;
  for (int run = 0; run < runs && !ev.exhausted(); ++run) {
    const int remaining = spec.budget - ev.used();
    const int share = remaining / (runs - run);
    const int cap = ev.used() + std::max(share, 1);
    if (run == 0) {
      nelder_mead(ev, problem, x0, f0, cap);
      continue;
    }
    std::vector<double> start = x0;
    for (double& v : start) v *= 1.0 + jitter(rng);
    problem.clamp(start);
    const double fs = ev.cost(start);
    nelder_mead(ev, problem, std::move(start), fs, cap);
  }
  return finish(ev, problem);
}

SearchResult grid_scan(const SearchSpec& spec, int resolution) {
  spec.validate();
  if (resolution < 1) throw std::invalid_argument("grid resolution must be at least 1");
  const Problem problem(spec);
  if (spec.free_shapes || problem.scalar_count() > 3) {
    throw DimensionTooHigh("grid_scan supports at most three free scalars with frozen shapes");
  }
  const auto& b = problem.bounds();
  const std::size_t d = b.size();

  std::vector<std::vector<double>> points;
  if (d == 0) {
    points.push_back(problem.initial());
  } else if (resolution == 1) {
    std::vector<double> mid(d);
    for (std::size_t i = 0; i < d; ++i) mid[i] = 0.5 * (b[i].lo + b[i].hi);
    points.push_back(mid);
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      std::vector<double> corner(d);
      for (std::size_t i = 0; i < d; ++i) corner[i] = (mask >> i & 1U) ? b[i].hi : b[i].lo;
      points.push_back(std::move(corner));
    }
  } else {
    std::vector<int> counter(d, 0);
    while (true) {
      std::vector<double> x(d);
      for (std::size_t i = 0; i < d; ++i) {
        x[i] = b[i].lo + (b[i].hi - b[i].lo) * counter[i] / static_cast<double>(resolution - 1);
      }
      points.push_back(std::move(x));
      std::size_t axis = 0;
      while (axis < d && ++counter[axis] == resolution) counter[axis++] = 0;
      if (axis == d) break;
    }
  }

  Evaluator ev(problem, spec.target, std::numeric_limits<int>::max());
  for (const auto& x : points) (void)ev.cost(x);
  return finish(ev, problem);
}

}  // namespace zeroprop
