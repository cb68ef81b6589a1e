#pragma once

// Closed-form Fourier spectra of symmetric clauses and O(sum k^2) evaluation
// of the weighted objective, its gradient and restricted Hessian blocks.

#include <cstddef>
#include <span>
#include <vector>

#include "mlsat/formula.hpp"

namespace mlsat {

/// Clauses longer than this are rejected when their spectrum is built.
inline constexpr std::size_t kMaxClauseSize = 2000;

/// Fourier coefficients of one non-constant clause after sign absorption.
///
/// The expansion is FE(a) = sum_s kappa[s] * e_s(b), where b_i = signs[i] *
/// a[vars[i]] and e_s is the elementary symmetric polynomial of degree s.
/// Negations live only in `signs`.
///
/// `by_count[t]` is the clause value when exactly t literals are True. When
/// the ESP sum is badly conditioned (large k away from parity), evaluation
/// switches to the distribution of the True count, which only adds
/// nonnegative terms.
struct ClauseSpectrum {
  std::vector<double> kappa;     // size k + 1
  std::vector<double> by_count;  // size k + 1
  bool count_eval = false;
  std::vector<double> signs;  // +1, or -1 for a negated literal
  std::vector<int> vars;      // 0-based variable indices
  double weight = 1.0;

  std::size_t size() const { return vars.size(); }
};

/// Spectrum of a normalized, non-constant clause. Throws std::invalid_argument
/// for CardLe (normalize first) and std::length_error above kMaxClauseSize.
ClauseSpectrum spectrum(const Clause& clause);

/// Coefficients of prod_i (values_i + t), ordered by power of t: entry j is
/// the coefficient of t^j, i.e. e_{k-j}(values).
std::vector<double> esp_coeffs(std::span<const double> values);

/// Elementary symmetric polynomials e_0..e_k of `values` written into `out`
/// (size k + 1), ordered by degree.
void elementary_symmetric(std::span<const double> values, std::span<double> out);

/// FE_c(a). `a` is the full assignment vector indexed by variable.
double eval_clause(const ClauseSpectrum& s, std::span<const double> a);

/// Dense symmetric matrix for restricted Hessian blocks.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * dim_ + j];
  }
  void add_symmetric(std::size_t i, std::size_t j, double v) {
    data_[i * dim_ + j] += v;
    if (i != j) data_[j * dim_ + i] += v;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// The weighted objective F(a) = sum_c w_c FE_c(a) of a formula.
///
/// Constant clauses do not get a spectrum; they contribute -w (always True)
/// or +w (always False) to a cached constant term. Immutable once built, so
/// one context can serve concurrent descents.
class ObjectiveContext {
 public:
  /// `weights` must have one positive entry per clause of `f`.
  ObjectiveContext(const Formula& f, std::vector<double> weights);

  int n() const { return n_; }
  std::size_t m() const { return m_; }

  /// Sum of all clause weights: F ranges over [-W, W].
  double total_weight() const { return total_weight_; }
  /// Sum of weights of the non-constant clauses.
  double active_weight() const { return active_weight_; }
  double min_weight() const { return min_weight_; }
  double constant_term() const { return constant_term_; }
  bool has_const_false() const { return const_false_count_ > 0; }
  std::size_t const_false_count() const { return const_false_count_; }

  const std::vector<ClauseSpectrum>& spectra() const { return spectra_; }
  const std::vector<NormalizedClause>& normalized() const { return normalized_; }
  const std::vector<double>& weights() const { return weights_; }

  double value(std::span<const double> a) const;

  void gradient(std::span<const double> a, std::span<double> out) const;
  std::vector<double> gradient(std::span<const double> a) const;

  /// Hessian of F restricted to the coordinates in `J` (0-based, distinct),
  /// the remaining coordinates held at `a`. Diagonal entries are zero.
  SymMatrix hessian_restricted(std::span<const double> a,
                               std::span<const int> J) const;

 private:
  int n_ = 0;
  std::size_t m_ = 0;
  double total_weight_ = 0.0;
  double active_weight_ = 0.0;
  double min_weight_ = 0.0;
  double constant_term_ = 0.0;
  std::size_t const_false_count_ = 0;
  std::vector<double> weights_;
  std::vector<NormalizedClause> normalized_;
  std::vector<ClauseSpectrum> spectra_;
};

}  // namespace mlsat
