#include "mlsat/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

namespace mlsat {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Sat: return "Sat";
    case SolveStatus::UnknownBestFound: return "UnknownBestFound";
    case SolveStatus::ThresholdMet: return "ThresholdMet";
  }
  return "?";
}

std::string_view to_string(WeightRule rule) {
  switch (rule) {
    case WeightRule::Uniform: return "uniform";
    case WeightRule::ClauseLength: return "length";
    case WeightRule::Explicit: return "explicit";
  }
  return "?";
}

SatisfiedCount count_satisfied(const Formula& f, const BooleanAssignment& b,
                               std::span<const double> weights) {
  if (!weights.empty() && weights.size() != f.m()) {
    throw std::invalid_argument("one weight per clause required");
  }
  if (b.size() != static_cast<std::size_t>(f.n)) {
    throw std::invalid_argument("assignment size does not match formula");
  }
  SatisfiedCount out;
  for (std::size_t c = 0; c < f.m(); ++c) {
    if (!clause_satisfied(f.clauses[c], b)) continue;
    ++out.count;
    out.weight += weights.empty() ? f.clauses[c].weight : weights[c];
  }
  return out;
}

std::vector<double> default_weights(const Formula& f, WeightRule rule) {
  std::vector<double> w(f.m(), 1.0);
  for (std::size_t c = 0; c < f.m(); ++c) {
    const auto& clause = f.clauses[c];
    switch (rule) {
      case WeightRule::Uniform:
        break;
      case WeightRule::ClauseLength:
        w[c] = static_cast<double>(std::max<std::size_t>(1, clause.size()));
        break;
      case WeightRule::Explicit:
        if (!clause.explicit_weight) {
          throw FormulaError("clause " + std::to_string(c + 1) +
                             " has no explicit weight");
        }
        w[c] = clause.weight;
        break;
    }
  }
  return w;
}

WeightRule effective_weight_rule(const Formula& f, WeightRule requested) {
  return f.has_explicit_weights() ? WeightRule::Explicit : requested;
}

BooleanAssignment round_randomized(std::span<const double> a, Rng& rng) {
  std::vector<std::int8_t> v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double p_true = 0.5 * (1.0 - a[i]);
    v[i] = uniform01(rng) < p_true ? -1 : 1;
  }
  return BooleanAssignment(std::move(v));
}

BooleanAssignment round_feasible(const ObjectiveContext& ctx,
                                 std::span<const double> a, double tau_bool,
                                 double eps_zero, Rng& rng) {
  const auto feas = is_feasible(ctx, a, tau_bool, eps_zero, rng);
  if (!feas.feasible) {
    throw std::invalid_argument("round_feasible: point is not feasible");
  }
  BooleanAssignment b(a.size(), 1);
  for (int i : feas.boundary) b.set(static_cast<std::size_t>(i), a[i] < 0 ? -1 : 1);
  return b;
}

namespace {

struct Candidate {
  BooleanAssignment witness;
  SatisfiedCount sat;
  double objective = 0.0;
  std::size_t restart = 0;
};

// Threshold mode ranks by clause count first since its goal is a count.
bool better(const Candidate& a, const Candidate& b, SolveMode mode) {
  if (mode == SolveMode::Threshold && a.sat.count != b.sat.count) {
    return a.sat.count > b.sat.count;
  }
  if (a.sat.weight != b.sat.weight) return a.sat.weight > b.sat.weight;
  if (a.objective != b.objective) return a.objective < b.objective;
  return a.restart < b.restart;
}

bool goal_met(const SolverConfig& cfg, const Formula& f, const SatisfiedCount& s) {
  if (cfg.mode == SolveMode::Threshold) return s.count >= cfg.target_satisfied;
  return s.count == f.m();
}

// Sets `stop` once the deadline passes, unless released earlier.
class Watchdog {
 public:
  Watchdog(std::atomic<bool>& stop, double seconds) : stop_(stop) {
    if (seconds <= 0) return;
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration<double>(seconds);
    thread_ = std::thread([this, deadline] {
      std::unique_lock lock(mu_);
      if (!cv_.wait_until(lock, deadline, [this] { return done_; })) {
        stop_.store(true);
      }
    });
  }
  ~Watchdog() {
    {
      std::lock_guard lock(mu_);
      done_ = true;
    }
    cv_.notify_all();
    if (thread_.joinable()) thread_.join();
  }

 private:
  std::atomic<bool>& stop_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool done_ = false;
  std::thread thread_;
};

}  // namespace

SolveResult solve(const Formula& f, const SolverConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (cfg.restarts == 0 && cfg.time_budget <= 0) {
    throw std::invalid_argument("solve: need restarts >= 1 or a time budget");
  }
  if (cfg.mode == SolveMode::Threshold && cfg.target_satisfied > f.m()) {
    throw std::invalid_argument("solve: target exceeds clause count");
  }
  const auto weights = default_weights(f, effective_weight_rule(f, cfg.weight_rule));
  const ObjectiveContext ctx(f, weights);

  SolveResult result;
  result.const_false_clauses = ctx.const_false_count();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  };

  // Any assignment is optimal on an all-constant formula, and a ConstFalse
  // clause makes Sat unreachable; return the all-False assignment at once.
  const bool trivial = ctx.spectra().empty() ||
                       (cfg.mode == SolveMode::Sat && ctx.has_const_false());
  if (trivial) {
    result.witness = BooleanAssignment(static_cast<std::size_t>(f.n), 1);
    const auto s = count_satisfied(f, result.witness, weights);
    result.satisfied = s.count;
    result.satisfied_weight = s.weight;
    result.objective = ctx.value(result.witness.as_reals());
    if (goal_met(cfg, f, s)) {
      result.status = cfg.mode == SolveMode::Threshold ? SolveStatus::ThresholdMet
                                                       : SolveStatus::Sat;
    }
    result.wall_time = elapsed();
    return result;
  }

  std::atomic<bool> stop{false};
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::optional<Candidate> best;
  std::size_t completed = 0;

  const std::size_t limit =
      cfg.restarts == 0 ? std::numeric_limits<std::size_t>::max() : cfg.restarts;

  auto worker = [&] {
    std::vector<double> x0(static_cast<std::size_t>(f.n));
    while (!stop.load()) {
      const std::size_t r = next.fetch_add(1);
      if (r >= limit) break;
      Rng rng = make_rng(cfg.seed, r);
      for (auto& v : x0) v = uniform_pm1(rng);
      const auto out = run_descent(ctx, x0, cfg.descent, rng, {}, &stop);

      Candidate cand;
      cand.restart = r;
      const auto feas = is_feasible(ctx, out.point, cfg.descent.tau_bool,
                                    cfg.descent.eps_zero, rng);
      if (feas.feasible) {
        BooleanAssignment b(out.point.size(), 1);
        for (int i : feas.boundary) b.set(i, out.point[i] < 0 ? -1 : 1);
        cand.witness = std::move(b);
        cand.sat = count_satisfied(f, cand.witness, weights);
      } else {
        bool first = true;
        for (std::size_t t = 0; t < std::max<std::size_t>(1, cfg.roundings); ++t) {
          auto b = round_randomized(out.point, rng);
          const auto s = count_satisfied(f, b, weights);
          if (first || better({b, s, 0.0, r}, cand, cfg.mode)) {
            cand.witness = std::move(b);
            cand.sat = s;
            first = false;
          }
        }
      }
      cand.objective = ctx.value(cand.witness.as_reals());

      std::lock_guard lock(mu);
      ++completed;
      result.iterations_total += out.iters;
      result.inner_saddle_escapes += out.inner_saddle_escapes;
      result.hessian_calls += out.hessian_calls;
      if (out.kind == DescentKind::LocalMin) ++result.local_minima;
      if (out.kind == DescentKind::Unknown) ++result.unknown_outcomes;
      if (!best || better(cand, *best, cfg.mode)) best = std::move(cand);
      if (goal_met(cfg, f, best->sat)) stop.store(true);
    }
  };

  {
    Watchdog watchdog(stop, cfg.time_budget);
    const unsigned threads = std::max(1U, cfg.parallelism);
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(threads);
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
  }

  result.restarts_used = completed;
  if (best) {
    result.witness = std::move(best->witness);
    result.satisfied = best->sat.count;
    result.satisfied_weight = best->sat.weight;
    result.objective = best->objective;
  } else {
    result.witness = BooleanAssignment(static_cast<std::size_t>(f.n), 1);
    const auto s = count_satisfied(f, result.witness, weights);
    result.satisfied = s.count;
    result.satisfied_weight = s.weight;
    result.objective = ctx.value(result.witness.as_reals());
  }
  // Status is decided from the truth table, never from F.
  const auto verified = count_satisfied(f, result.witness, weights);
  if (cfg.mode == SolveMode::Threshold) {
    if (verified.count >= cfg.target_satisfied) result.status = SolveStatus::ThresholdMet;
  } else if (verified.count == f.m()) {
    result.status = SolveStatus::Sat;
  }
  result.wall_time = elapsed();
  return result;
}

}  // namespace mlsat
