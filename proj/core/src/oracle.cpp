#include "mlsat/oracle.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace mlsat::oracle {

namespace {

BooleanAssignment point_from_bits(std::uint64_t bits, int n) {
  std::vector<std::int8_t> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = (bits >> i) & 1U ? -1 : 1;
  return BooleanAssignment(std::move(v));
}

}  // namespace

FullSpectrum brute_force_spectrum(const Clause& clause) {
  const std::size_t k = clause.literals.size();
  if (k > kMaxSpectrumSize) {
    throw std::length_error("brute-force spectrum limited to k <= 20");
  }
  // Relabel the clause onto variables 1..k so it can be evaluated on a k-bit
  // cube; the original labels are kept in `vars`.
  FullSpectrum out;
  Clause local = clause;
  for (std::size_t i = 0; i < k; ++i) {
    out.vars.push_back(clause.literals[i].var);
    local.literals[i].var = static_cast<int>(i) + 1;
  }
  {
    auto sorted = out.vars;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::length_error("brute-force spectrum expects distinct variables");
    }
  }

  const std::size_t points = std::size_t{1} << k;
  std::vector<double> f(points);
  for (std::size_t x = 0; x < points; ++x) {
    f[x] = clause_satisfied(local, point_from_bits(x, static_cast<int>(k))) ? -1.0
                                                                          : 1.0;
  }
  // f_hat(S) = E_x[f(x) chi_S(x)], chi_S(x) = (-1)^{|S & x|} with bit = True.
  // The Walsh-Hadamard butterfly evaluates all 2^k averages at once.
  for (std::size_t len = 1; len < points; len <<= 1) {
    for (std::size_t i = 0; i < points; i += len << 1) {
      for (std::size_t j = i; j < i + len; ++j) {
        const double u = f[j];
        const double v = f[j + len];
        f[j] = u + v;
        f[j + len] = u - v;
      }
    }
  }
  for (auto& c : f) c /= static_cast<double>(points);
  out.coefficients = std::move(f);
  return out;
}

double eval_full_spectrum(const FullSpectrum& spec, std::span<const double> a) {
  double total = 0.0;
  const std::size_t k = spec.size();
  for (std::size_t S = 0; S < spec.coefficients.size(); ++S) {
    if (spec.coefficients[S] == 0.0) continue;
    double term = spec.coefficients[S];
    for (std::size_t i = 0; i < k; ++i) {
      if ((S >> i) & 1U) term *= a[spec.vars[i] - 1];
    }
    total += term;
  }
  return total;
}

std::size_t satisfied_count(const Formula& f, const BooleanAssignment& b) {
  std::size_t count = 0;
  for (const auto& c : f.clauses) count += clause_satisfied(c, b);
  return count;
}

BruteForceResult brute_force_solve(const Formula& f) {
  if (f.n > kMaxSolveVars) {
    throw std::length_error("brute-force solve limited to n <= 24");
  }
  BruteForceResult best;
  bool first = true;
  const std::uint64_t points = std::uint64_t{1} << f.n;
  for (std::uint64_t x = 0; x < points; ++x) {
    auto b = point_from_bits(x, f.n);
    std::size_t count = 0;
    double weight = 0.0;
    for (const auto& c : f.clauses) {
      if (clause_satisfied(c, b)) {
        ++count;
        weight += c.weight;
      }
    }
    if (first || count > best.max_satisfied ||
        (count == best.max_satisfied && weight > best.max_weight)) {
      best = {count, weight, std::move(b)};
      first = false;
      if (count == f.clauses.size() && !f.has_explicit_weights()) break;
    }
  }
  return best;
}

double min_over_cube(int n, const Objective& objective) {
  if (n > kMaxSolveVars) throw std::length_error("cube enumeration limited to n <= 24");
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> x(static_cast<std::size_t>(n));
  const std::uint64_t points = std::uint64_t{1} << n;
  for (std::uint64_t bits = 0; bits < points; ++bits) {
    for (int i = 0; i < n; ++i) x[i] = (bits >> i) & 1U ? -1.0 : 1.0;
    best = std::min(best, objective(x));
  }
  return best;
}

std::vector<double> fd_gradient(const Objective& F, std::span<const double> x,
                                double h) {
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = F(probe);
    probe[i] = x[i] - h;
    const double down = F(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

std::vector<double> fd_hessian(const Objective& F, std::span<const double> x,
                               double h) {
  const std::size_t n = x.size();
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> H(n * n, 0.0);
  const double f0 = F(probe);
  for (std::size_t i = 0; i < n; ++i) {
    probe[i] = x[i] + h;
    const double up = F(probe);
    probe[i] = x[i] - h;
    const double down = F(probe);
    probe[i] = x[i];
    H[i * n + i] = (up - 2.0 * f0 + down) / (h * h);
    for (std::size_t j = i + 1; j < n; ++j) {
      auto at = [&](double di, double dj) {
        probe[i] = x[i] + di;
        probe[j] = x[j] + dj;
        const double v = F(probe);
        probe[i] = x[i];
        probe[j] = x[j];
        return v;
      };
      const double v = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
      H[i * n + j] = v;
      H[j * n + i] = v;
    }
  }
  return H;
}

double rounding_expectation_exact(const Formula& f, std::span<const double> a,
                                  std::span<const double> weights) {
  if (f.n > kMaxExpectationVars) {
    throw std::length_error("exact rounding expectation limited to n <= 12");
  }
  if (weights.size() != f.clauses.size()) {
    throw std::invalid_argument("one weight per clause required");
  }
  double expectation = 0.0;
  const std::uint64_t points = std::uint64_t{1} << f.n;
  for (std::uint64_t bits = 0; bits < points; ++bits) {
    double p = 1.0;
    for (int i = 0; i < f.n; ++i) {
      // P(R_i = -1) = (1 - a_i) / 2
      p *= (bits >> i) & 1U ? 0.5 * (1.0 - a[i]) : 0.5 * (1.0 + a[i]);
    }
    if (p == 0.0) continue;
    auto b = point_from_bits(bits, f.n);
    double sat = 0.0;
    for (std::size_t c = 0; c < f.clauses.size(); ++c) {
      if (clause_satisfied(f.clauses[c], b)) sat += weights[c];
    }
    expectation += p * sat;
  }
  return expectation;
}

}  // namespace mlsat::oracle
