#include "mlsat/optimizer.hpp"

#include <algorithm>
#include <cmath>

namespace mlsat {

namespace {

constexpr int kEscapeAttempts = 4;

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double norm_sq(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

bool in_box(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(),
                     [](double v) { return v >= -1.0 && v <= 1.0; });
}

// Halves the step from `eta` until x + step * v lands in the box and strictly
// lowers F.
std::optional<std::vector<double>> shrink_until_decrease(
    const ObjectiveContext& ctx, std::span<const double> x,
    std::span<const double> v, double eta, int shrinks, double f_x) {
  std::vector<double> trial(x.size());
  double step = eta;
  for (int s = 0; s <= shrinks; ++s, step *= 0.5) {
    for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + step * v[i];
    if (!in_box(trial)) continue;
    if (ctx.value(trial) < f_x) return trial;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(DescentKind kind) {
  switch (kind) {
    case DescentKind::LocalMin: return "local-min";
    case DescentKind::Converged: return "converged";
    case DescentKind::IterationCap: return "iteration-cap";
    case DescentKind::Unknown: return "unknown";
  }
  return "?";
}

double default_step_size(const ObjectiveContext& ctx) {
  const double w = ctx.active_weight();
  if (ctx.n() == 0 || w <= 0.0) return 1.0;
  return 1.0 / (static_cast<double>(ctx.n()) * w);
}

std::vector<double> project_box(std::span<const double> y) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = std::clamp(y[i], -1.0, 1.0);
  return out;
}

std::vector<double> gradient_mapping(std::span<const double> x,
                                     std::span<const double> g, double eta) {
  std::vector<double> G(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double projected = std::clamp(x[i] - eta * g[i], -1.0, 1.0);
    G[i] = (x[i] - projected) / eta;
  }
  return G;
}

bool is_zero(const Polynomial& F, std::size_t dims, double eps_zero, Rng& rng) {
  std::vector<double> y(dims);
  int zero_votes = 0;
  for (int trial = 0; trial < 3; ++trial) {
    for (auto& v : y) v = uniform_pm1(rng);
    zero_votes += std::abs(F(y)) <= eps_zero;
  }
  return zero_votes >= 2;
}

Feasibility is_feasible(const ObjectiveContext& ctx, std::span<const double> x,
                        double tau_bool, double eps_zero, Rng& rng) {
  Feasibility out;
  std::vector<double> snapped(x.begin(), x.end());
  std::vector<int> free;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) >= 1.0 - tau_bool) {
      out.boundary.push_back(static_cast<int>(i));
      snapped[i] = x[i] > 0.0 ? 1.0 : -1.0;
    } else {
      free.push_back(static_cast<int>(i));
    }
  }
  if (free.empty()) {
    out.feasible = true;
    return out;
  }
  std::vector<double> point = snapped;
  for (int i : free) point[i] = uniform_pm1(rng);
  const double reference = ctx.value(point);
  Polynomial deviation = [&](std::span<const double> y) {
    for (std::size_t j = 0; j < free.size(); ++j) point[free[j]] = y[j];
    return ctx.value(point) - reference;
  };
  out.feasible = is_zero(deviation, free.size(), eps_zero, rng);
  return out;
}

std::optional<std::vector<double>> neg_direction_saddle(const Polynomial& F,
                                                        std::size_t dims,
                                                        double eps_zero,
                                                        Rng& rng) {
  // Invariant: the current function of the coordinates i.. is
  //   y -> F(prefix, y) - offset,   vanishing at y = 0.
  std::vector<double> prefix;
  prefix.reserve(dims);
  double offset = 0.0;
  std::vector<double> v(dims, 0.0);
  std::vector<double> full(dims, 0.0);

  for (std::size_t i = 0; i < dims; ++i) {
    const std::size_t rest = dims - i - 1;
    auto fixed_at = [&](double head) -> Polynomial {
      return [&, head](std::span<const double> y) {
        std::copy(prefix.begin(), prefix.end(), full.begin());
        full[i] = head;
        std::copy(y.begin(), y.end(), full.begin() + static_cast<long>(i) + 1);
        return F(full) - offset;
      };
    };
    // F = x_i g(rest) + h(rest) with h = F|_{x_i=0}.
    const Polynomial h = fixed_at(0.0);
    if (!is_zero(h, rest, eps_zero, rng)) {
      prefix.push_back(0.0);  // v_i = 0, continue on h
      continue;
    }
    // h == 0, so F = x_i g and g = F|_{x_i=1}.
    const Polynomial g = fixed_at(1.0);
    const std::vector<double> origin(rest, 0.0);
    const double g0 = g(origin);
    if (std::abs(g0) > eps_zero) {
      v[i] = -sgn(g0);
      return v;
    }
    const Polynomial g_shifted = [&](std::span<const double> y) { return g(y) - g0; };
    if (is_zero(g_shifted, rest, eps_zero, rng)) return std::nullopt;
    v[i] = 1.0;  // F(delta(1, u)) = delta g(delta u), recurse on g
    prefix.push_back(1.0);
    offset += g0;
  }
  return std::nullopt;
}

EscapeResult dec_inner_saddle(const ObjectiveContext& ctx,
                              std::span<const double> x, double eta,
                              const DescentConfig& cfg, Rng& rng) {
  EscapeResult out{std::vector<double>(x.begin(), x.end()), false};
  std::vector<int> free;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) < 1.0 - cfg.tau_bool) free.push_back(static_cast<int>(i));
  }
  if (free.empty()) return out;

  const double f_x = ctx.value(x);
  std::vector<double> point(x.begin(), x.end());
  const Polynomial shifted = [&](std::span<const double> y) {
    for (std::size_t j = 0; j < free.size(); ++j) point[free[j]] = x[free[j]] + y[j];
    return ctx.value(point) - f_x;
  };
  // Terms near the zero threshold can be classified inconsistently, giving a
  // direction that does not descend; coarser thresholds are tried next.
  double eps_zero = cfg.eps_zero;
  for (int attempt = 0; attempt < kEscapeAttempts; ++attempt, eps_zero *= 100.0) {
    auto dir = neg_direction_saddle(shifted, free.size(), eps_zero, rng);
    if (!dir) continue;
    std::vector<double> v(x.size(), 0.0);
    for (std::size_t j = 0; j < free.size(); ++j) v[free[j]] = (*dir)[j];
    if (auto moved = shrink_until_decrease(ctx, x, v, eta, cfg.escape_shrinks, f_x)) {
      out.point = std::move(*moved);
      out.moved = true;
      break;
    }
  }
  return out;
}

HessianStep use_hessian(const ObjectiveContext& ctx, std::span<const double> x,
                        double eta, const DescentConfig& cfg) {
  HessianStep out{std::vector<double>(x.begin(), x.end()), LocalMinFlag::Unknown};
  const auto g = ctx.gradient(x);

  std::vector<int> J;
  std::vector<bool> boolean_slot;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (std::abs(g[j]) <= cfg.eps) {
      J.push_back(static_cast<int>(j));
      boolean_slot.push_back(std::abs(x[j]) >= 1.0 - cfg.tau_bool);
    }
  }
  const SymMatrix H = ctx.hessian_restricted(x, J);
  const auto side = [&](std::size_t r) { return x[J[r]] > 0.0 ? 1.0 : -1.0; };

  // Branch 1: Boolean i, interior j with H_ij != 0.
  double best = cfg.eps_zero;
  std::optional<std::pair<std::size_t, std::size_t>> pick;
  for (std::size_t r = 0; r < J.size(); ++r) {
    if (!boolean_slot[r]) continue;
    for (std::size_t c = 0; c < J.size(); ++c) {
      if (boolean_slot[c] || std::abs(H(r, c)) <= best) continue;
      best = std::abs(H(r, c));
      pick = {r, c};
    }
  }
  std::vector<double> v(x.size(), 0.0);
  if (pick) {
    auto [r, c] = *pick;
    v[J[r]] = -side(r);
    v[J[c]] = sgn(side(r) * H(r, c));
  } else {
    // Branch 2: two Boolean coordinates with H x_i1 x_i2 < 0.
    best = cfg.eps_zero;
    for (std::size_t r = 0; r < J.size(); ++r) {
      if (!boolean_slot[r]) continue;
      for (std::size_t c = r + 1; c < J.size(); ++c) {
        if (!boolean_slot[c]) continue;
        const double curvature = H(r, c) * side(r) * side(c);
        if (curvature < -best) {
          best = -curvature;
          pick = {r, c};
        }
      }
    }
    if (pick) {
      auto [r, c] = *pick;
      v[J[r]] = -side(r);
      v[J[c]] = -side(c);
    }
  }

  if (pick) {
    if (auto moved = shrink_until_decrease(ctx, x, v, eta, cfg.escape_shrinks,
                                           ctx.value(x))) {
      out.point = std::move(*moved);
      out.flag = LocalMinFlag::No;
    }
    return out;
  }

  // Certificate: with no negative pattern, x is a local minimum when either
  // the Boolean or the interior part of J is empty and every Boolean pair
  // curves strictly upward.
  std::size_t booleans = 0;
  for (bool b : boolean_slot) booleans += b;
  const bool split_empty = booleans == 0 || booleans == J.size();
  bool strictly_convex = true;
  for (std::size_t r = 0; r < J.size() && strictly_convex; ++r) {
    if (!boolean_slot[r]) continue;
    for (std::size_t c = r + 1; c < J.size(); ++c) {
      if (boolean_slot[c] && H(r, c) * side(r) * side(c) <= cfg.eps_zero) {
        strictly_convex = false;
        break;
      }
    }
  }
  if (split_empty && strictly_convex) out.flag = LocalMinFlag::Yes;
  return out;
}

DescentOutcome run_descent(const ObjectiveContext& ctx,
                           std::span<const double> x0, const DescentConfig& cfg,
                           Rng& rng, const StepObserver& observer,
                           const std::atomic<bool>* stop) {
  DescentOutcome out;
  std::vector<double> x = project_box(x0);
  double fx = ctx.value(x);
  const double eta = cfg.eta > 0.0 ? cfg.eta : default_step_size(ctx);
  const double eta_cap = std::max(eta, cfg.eta_max);
  double step = cfg.line_search ? eta_cap : eta;
  const double floor_value =
      -ctx.total_weight() + 1e-9 * std::max(1.0, ctx.total_weight());

  std::vector<double> g(x.size());
  std::vector<double> next(x.size());
  auto finish = [&](DescentKind kind) {
    out.kind = kind;
    out.value = ctx.value(x);
    out.point = std::move(x);
    return out;
  };

  for (; out.iters < cfg.max_iters; ++out.iters) {
    if (stop != nullptr && stop->load(std::memory_order_relaxed)) break;
    if (fx <= floor_value) return finish(DescentKind::Converged);

    ctx.gradient(x, g);
    const auto G = gradient_mapping(x, g, eta);
    if (std::sqrt(norm_sq(G)) > cfg.eps) {
      double s = eta;
      double f_next = 0.0;
      double mapping_sq = 0.0;
      if (cfg.line_search) {
        s = std::min(2.0 * step, eta_cap);
        for (;;) {
          for (std::size_t i = 0; i < x.size(); ++i) {
            next[i] = std::clamp(x[i] - s * g[i], -1.0, 1.0);
          }
          mapping_sq = 0.0;
          for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = (x[i] - next[i]) / s;
            mapping_sq += d * d;
          }
          f_next = ctx.value(next);
          if (s <= eta || f_next <= fx - 0.5 * s * mapping_sq) break;
          s = std::max(0.5 * s, eta);
        }
        step = s;
      } else {
        for (std::size_t i = 0; i < x.size(); ++i) {
          next[i] = std::clamp(x[i] - eta * g[i], -1.0, 1.0);
        }
        f_next = ctx.value(next);
        mapping_sq = norm_sq(G);
      }
      if (observer) observer(StepRecord{x, next, fx, f_next, s, mapping_sq});
      std::swap(x, next);
      fx = f_next;
      continue;
    }

    // ||G|| <= eps: local minimum or saddle.
    const double escape_eta = cfg.line_search ? step : eta;
    const auto feas = is_feasible(ctx, x, cfg.tau_bool, cfg.eps_zero, rng);
    if (!feas.feasible) {
      ++out.inner_saddle_escapes;
      auto esc = dec_inner_saddle(ctx, x, escape_eta, cfg, rng);
      if (!esc.moved) return finish(DescentKind::Unknown);
      x = std::move(esc.point);
      fx = ctx.value(x);
      continue;
    }
    const bool first_order_min =
        std::all_of(feas.boundary.begin(), feas.boundary.end(),
                    [&](int i) { return std::abs(g[i]) > cfg.eps; });
    if (first_order_min) return finish(DescentKind::LocalMin);

    ++out.hessian_calls;
    auto hs = use_hessian(ctx, x, escape_eta, cfg);
    if (hs.flag == LocalMinFlag::Yes) return finish(DescentKind::LocalMin);
    if (hs.flag == LocalMinFlag::Unknown) return finish(DescentKind::Unknown);
    x = std::move(hs.point);
    fx = ctx.value(x);
  }
  return finish(DescentKind::IterationCap);
}

}  // namespace mlsat
