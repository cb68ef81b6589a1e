#pragma once

// Restart orchestration, rounding and stopping modes (SAT, MaxSAT, threshold).
//
// The solver is incomplete: it never reports unsatisfiability. An exhausted
// budget yields the best assignment found with status UnknownBestFound.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mlsat/formula.hpp"
#include "mlsat/fourier.hpp"
#include "mlsat/optimizer.hpp"
#include "mlsat/random.hpp"

namespace mlsat {

enum class SolveMode { Sat, MaxSat, Threshold };
enum class WeightRule { Uniform, ClauseLength, Explicit };
enum class SolveStatus { Sat, UnknownBestFound, ThresholdMet };

std::string_view to_string(SolveStatus status);
std::string_view to_string(WeightRule rule);

struct SolverConfig {
  std::size_t restarts = 1000;
  double time_budget = 10.0;  // seconds; <= 0 disables the wall-clock cap
  unsigned parallelism = 1;
  std::uint64_t seed = 0;
  SolveMode mode = SolveMode::Sat;
  std::size_t target_satisfied = 0;  // Threshold mode only
  // Applies only when the formula carries no "w" weights; weighted files
  // always use their explicit weights.
  WeightRule weight_rule = WeightRule::ClauseLength;
  std::size_t roundings = 32;  // randomized roundings per non-feasible point
  DescentConfig descent = [] {
    DescentConfig d;
    d.line_search = true;
    return d;
  }();
};

struct SolveResult {
  SolveStatus status = SolveStatus::UnknownBestFound;
  BooleanAssignment witness;
  std::size_t satisfied = 0;
  double satisfied_weight = 0.0;
  double objective = 0.0;  // F at the witness
  std::size_t restarts_used = 0;
  std::size_t iterations_total = 0;
  double wall_time = 0.0;
  // Diagnostics.
  std::size_t const_false_clauses = 0;
  std::size_t local_minima = 0;
  std::size_t unknown_outcomes = 0;
  std::size_t inner_saddle_escapes = 0;
  std::size_t hessian_calls = 0;
};

struct SatisfiedCount {
  std::size_t count = 0;
  double weight = 0.0;
};

/// Truth-table count. `weights` (one per clause) defaults to the clause
/// weights stored in the formula.
SatisfiedCount count_satisfied(const Formula& f, const BooleanAssignment& b,
                               std::span<const double> weights = {});

/// Uniform: 1 each. ClauseLength: w_c = |c| (at least 1). Explicit: the "w"
/// prefixes, every clause must carry one.
std::vector<double> default_weights(const Formula& f, WeightRule rule);

/// The rule solve() applies: Explicit for weighted files, else `requested`.
WeightRule effective_weight_rule(const Formula& f, WeightRule requested);

/// P(R_i = -1) = (1 - a_i) / 2, independently per coordinate.
BooleanAssignment round_randomized(std::span<const double> a, Rng& rng);

/// Snaps Boolean coordinates of a feasible point to their sign and sets the
/// interior ones to +1 (False). Throws std::invalid_argument when `a` is not
/// feasible.
BooleanAssignment round_feasible(const ObjectiveContext& ctx,
                                 std::span<const double> a, double tau_bool,
                                 double eps_zero, Rng& rng);

SolveResult solve(const Formula& f, const SolverConfig& cfg);

}  // namespace mlsat
