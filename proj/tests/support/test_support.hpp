#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

#include "mlsat/formula.hpp"
#include "mlsat/fourier.hpp"
#include "mlsat/random.hpp"

namespace mlsat::testing {

inline Formula parse(std::string_view text) { return parse_formula(text); }

inline ObjectiveContext unit_context(const Formula& f) {
  return ObjectiveContext(f, std::vector<double>(f.m(), 1.0));
}

inline Clause make_clause(ClauseKind kind, std::vector<int> lits, int threshold = 0) {
  Clause c;
  c.kind = kind;
  c.threshold = threshold;
  for (int l : lits) c.literals.push_back({std::abs(l), l < 0});
  return c;
}

inline std::vector<double> random_point(std::size_t n, Rng& rng, double bound = 1.0) {
  std::vector<double> x(n);
  for (auto& v : x) v = bound * uniform_pm1(rng);
  return x;
}

// One clause of a random kind on `k` distinct variables with random signs.
inline Clause random_clause(int n, int max_k, Rng& rng) {
  const int k = 1 + static_cast<int>(uniform_below(rng, std::min(n, max_k)));
  std::vector<int> vars(static_cast<std::size_t>(n));
  std::iota(vars.begin(), vars.end(), 1);
  for (int i = 0; i < k; ++i) {
    std::swap(vars[i], vars[i + uniform_below(rng, vars.size() - i)]);
  }
  Clause c;
  const auto pick = uniform_below(rng, 5);
  c.kind = static_cast<ClauseKind>(pick);
  if (c.kind == ClauseKind::Nae && k < 2) c.kind = ClauseKind::Cnf;
  for (int i = 0; i < k; ++i) c.literals.push_back({vars[i], uniform_below(rng, 2) == 1});
  if (c.is_card()) c.threshold = 1 + static_cast<int>(uniform_below(rng, k));
  return c;
}

inline Formula random_formula(int n, std::size_t m, int max_k, Rng& rng) {
  Formula f;
  f.n = n;
  for (std::size_t i = 0; i < m; ++i) f.clauses.push_back(random_clause(n, max_k, rng));
  return f;
}

// Random formula whose clauses are all satisfied by a hidden assignment.
inline Formula planted_formula(int n, std::size_t m, int max_k, Rng& rng,
                               BooleanAssignment* planted = nullptr) {
  std::vector<std::int8_t> hidden(static_cast<std::size_t>(n));
  for (auto& v : hidden) v = uniform_below(rng, 2) ? -1 : 1;
  BooleanAssignment b(hidden);
  Formula f;
  f.n = n;
  while (f.clauses.size() < m) {
    auto c = random_clause(n, max_k, rng);
    if (clause_satisfied(c, b)) f.clauses.push_back(std::move(c));
  }
  if (planted) *planted = b;
  return f;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace mlsat::testing
