#pragma once

// Brute-force references for tests and acceptance runs. Nothing here is used
// on the solving path, and nothing here calls into the Fourier code: clause
// semantics come from truth tables only.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mlsat/formula.hpp"

namespace mlsat::oracle {

inline constexpr std::size_t kMaxSpectrumSize = 20;
inline constexpr int kMaxSolveVars = 24;
inline constexpr int kMaxExpectationVars = 12;

/// Full Fourier spectrum of one clause over its own k variables. Subsets are
/// bitmasks over clause positions: bit i refers to `vars[i]`.
struct FullSpectrum {
  std::vector<int> vars;  // 1-based, in clause order
  std::vector<double> coefficients;  // size 2^k

  double at(std::uint32_t subset) const { return coefficients[subset]; }
  std::size_t size() const { return vars.size(); }
};

/// Averages f(x) chi_S(x) over all 2^k points, f = -1 on satisfying points.
/// Throws std::length_error for k > kMaxSpectrumSize or repeated variables.
FullSpectrum brute_force_spectrum(const Clause& clause);

/// Evaluates sum_S coef(S) prod_{i in S} a_{vars[i]} directly (2^k terms).
double eval_full_spectrum(const FullSpectrum& spec, std::span<const double> a);

struct BruteForceResult {
  std::size_t max_satisfied = 0;
  double max_weight = 0.0;
  BooleanAssignment witness;
};

/// Exhaustive MaxSAT by count (ties broken by weight, then first found).
/// Throws std::length_error for n > kMaxSolveVars.
BruteForceResult brute_force_solve(const Formula& f);

/// Number of satisfied clauses by truth table.
std::size_t satisfied_count(const Formula& f, const BooleanAssignment& b);

/// Minimum over all Boolean points of `objective`.
double min_over_cube(int n, const std::function<double(std::span<const double>)>& objective);

using Objective = std::function<double(std::span<const double>)>;

std::vector<double> fd_gradient(const Objective& F, std::span<const double> x,
                                double h = 1e-5);

/// Central-difference Hessian, returned row-major (n*n).
std::vector<double> fd_hessian(const Objective& F, std::span<const double> x,
                               double h = 1e-4);

/// Exact expected satisfied weight of the randomized rounding of `a`, by
/// enumerating all 2^n outcomes. `weights` has one entry per clause (pass all
/// ones for the clause count). Throws for n > kMaxExpectationVars.
double rounding_expectation_exact(const Formula& f, std::span<const double> a,
                                  std::span<const double> weights);

}  // namespace mlsat::oracle
