#pragma once

// Projected gradient descent on [-1,1]^n with first-order local-minimum
// detection and explicit saddle escapes.
//
// Exact-zero tests of the underlying method are replaced by tolerances:
//   eps       gradient-mapping norm and "gradient is zero" threshold
//   eps_zero  constancy / Hessian-entry threshold
//   tau_bool  a coordinate with |x_i| >= 1 - tau_bool counts as Boolean

#include <atomic>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mlsat/fourier.hpp"
#include "mlsat/random.hpp"

namespace mlsat {

struct DescentConfig {
  double eta = 0.0;  // <= 0 selects default_step_size()
  double eps = 1e-5;
  std::size_t max_iters = 20000;
  double tau_bool = 1e-6;
  double eps_zero = 1e-9;
  // Backtracking: start each step from twice the last accepted step (capped
  // at eta_max) and halve until the descent inequality holds. Steps never go
  // below the theoretical eta, where the inequality is guaranteed.
  bool line_search = false;
  double eta_max = 1.0;
  int escape_shrinks = 30;
};

/// 1 / (n * W) with W the weight of the non-constant clauses; this is
/// 1/(nm) on unit-weight formulas.
double default_step_size(const ObjectiveContext& ctx);

enum class DescentKind { LocalMin, Converged, IterationCap, Unknown };
std::string_view to_string(DescentKind kind);

struct DescentOutcome {
  std::vector<double> point;
  DescentKind kind = DescentKind::Unknown;
  double value = 0.0;
  std::size_t iters = 0;
  std::size_t inner_saddle_escapes = 0;
  std::size_t hessian_calls = 0;
};

/// Componentwise clamp onto [-1,1].
std::vector<double> project_box(std::span<const double> y);

/// G(x) = (x - P(x - eta g)) / eta.
std::vector<double> gradient_mapping(std::span<const double> x,
                                     std::span<const double> g, double eta);

/// A multilinear function given only by evaluation.
using Polynomial = std::function<double(std::span<const double>)>;

/// Randomized identity test: three uniform samples from [-1,1]^dims, majority
/// of |F(x)| <= eps_zero.
bool is_zero(const Polynomial& F, std::size_t dims, double eps_zero, Rng& rng);

struct Feasibility {
  bool feasible = false;
  std::vector<int> boundary;  // I: coordinates with |x_i| >= 1 - tau_bool
};

/// Decides whether fixing the Boolean coordinates of x (snapped to +-1)
/// leaves a constant function of the remaining ones.
Feasibility is_feasible(const ObjectiveContext& ctx, std::span<const double> x,
                        double tau_bool, double eps_zero, Rng& rng);

/// Direction v with F(delta v) < 0 for all small delta > 0, for a multilinear
/// F with F(0) = 0. Walks the coordinates in order, splitting
/// F = x_1 g(rest) + h(rest). Returns nullopt if every branch tests
/// identically zero.
std::optional<std::vector<double>> neg_direction_saddle(const Polynomial& F,
                                                        std::size_t dims,
                                                        double eps_zero,
                                                        Rng& rng);

struct EscapeResult {
  std::vector<double> point;
  bool moved = false;
};

/// Moves off a non-feasible critical point along a negative direction of the
/// function obtained by fixing its Boolean coordinates. The step starts at
/// `eta` and halves (at most cfg.escape_shrinks times) until the new point is
/// in the box and strictly lowers F. If no step works, the direction is
/// recomputed with the zero threshold raised 100-fold, up to three times.
/// `moved` is false if that never happens.
EscapeResult dec_inner_saddle(const ObjectiveContext& ctx,
                              std::span<const double> x, double eta,
                              const DescentConfig& cfg, Rng& rng);

enum class LocalMinFlag { Yes, No, Unknown };

struct HessianStep {
  std::vector<double> point;
  LocalMinFlag flag = LocalMinFlag::Unknown;
};

/// Second-order test at a feasible critical point.
///
/// J = {j : |grad_j| <= eps}, I = Boolean coordinates of J, H = Hessian on J.
///  - some i in I, j in J-I with H_ij != 0: move i inward, j by sgn(x_i H_ij)
///  - some i1, i2 in I with H x_i1 x_i2 < 0: move both inward
///  - otherwise a certified local minimum when I or J-I is empty and every
///    pair in I has H x_i1 x_i2 > 0; Unknown in all remaining cases.
/// Moves are accepted only if they strictly lower F (step halving from eta);
/// a branch whose move never decreases F reports Unknown.
HessianStep use_hessian(const ObjectiveContext& ctx, std::span<const double> x,
                        double eta, const DescentConfig& cfg);

/// One accepted projected-gradient step, as seen by a StepObserver.
struct StepRecord {
  std::span<const double> before;
  std::span<const double> after;
  double value_before = 0.0;
  double value_after = 0.0;
  double eta = 0.0;
  double mapping_norm_sq = 0.0;  // ||G(x_t)||^2 at this eta
};
using StepObserver = std::function<void(const StepRecord&)>;

DescentOutcome run_descent(const ObjectiveContext& ctx,
                           std::span<const double> x0, const DescentConfig& cfg,
                           Rng& rng, const StepObserver& observer = {},
                           const std::atomic<bool>* stop = nullptr);

}  // namespace mlsat
