#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "zeroprop/proportions.hpp"

namespace zeroprop {

enum class Target { minimize_nu, maximize_kappa };

std::string to_string(Target t);
/// Accepts "minimize_nu" or "maximize_kappa"; throws std::invalid_argument otherwise.
Target parse_target(const std::string& name);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// A search problem. The initial point is `section4` (minimize_nu) or
/// `section5` (maximize_kappa); θ is taken from that record and never varied.
///
/// Free scalars are exactly the keys of `bounds`: "r" and "R" for ν, "R" and
/// "delta" for κ. With `free_shapes` every shape coefficient (and the twist
/// linear coefficient) is free as well; the shape bases keep the polynomial
/// constraints satisfied for every candidate. `shape_degrees`, when given,
/// zero-pads the initial shapes to those lengths ({m1, m2} or {m, m'}).
struct SearchSpec {
  Target target = Target::maximize_kappa;
  SectionFourParams section4;
  SectionFiveParams section5;
  std::map<std::string, Interval> bounds;
  bool free_shapes = false;
  std::vector<int> shape_degrees;
  int budget = 1000;
  std::uint64_t seed = 0;
  int restarts = 0;

  void validate() const;
};

struct TraceEntry {
  int evaluation = 0;
  double objective = 0.0;
};

struct SearchResult {
  SectionFourParams section4;
  SectionFiveParams section5;
  double best_objective = 0.0;  // ν or κ at the best point
  int evaluations_used = 0;
  std::vector<TraceEntry> trace;  // strict improvements, in evaluation order
};

/// ν or κ for the given parameters, depending on the target.
double evaluate_objective(Target target, const SectionFourParams& p4, const SectionFiveParams& p5);

/// Nelder-Mead with a boundary penalty, run from the initial point and then
/// from `restarts` seeded ±10% multiplicative perturbations of it. The budget
/// caps the total number of objective evaluations across all runs.
/// Throws EvaluationFailure if the objective cannot be evaluated at the seed.
SearchResult optimize(const SearchSpec& spec);

/// Exhaustive lattice over at most three free scalars (shapes frozen).
/// resolution >= 2 evaluates `resolution` evenly spaced values per axis,
/// bounds included; resolution 1 evaluates the box midpoint and its corners.
SearchResult grid_scan(const SearchSpec& spec, int resolution);

}  // namespace zeroprop
