#include "mlsat/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace mlsat {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

// Deflation of prod(b_j + t) by (b_i + t) is only trusted when every root is
// well inside the box; otherwise derivatives come from the count distribution.
constexpr double kDeflationLimit = 0.9;

// Above this bound on sum_s |kappa_s| C(k,s) the ESP sum loses more than
// ~1e-10 absolute accuracy near the corners of the cube.
constexpr double kConditionLimit = 1e6;

std::vector<cpp_int> binomial_row(std::size_t n) {
  std::vector<cpp_int> row(n + 1);
  row[0] = 1;
  for (std::size_t i = 1; i <= n; ++i) row[i] = row[i - 1] * (n - i + 1) / i;
  return row;
}

double to_double(const cpp_int& num, const cpp_int& den) {
  return cpp_rational(num, den).convert_to<double>();
}

// At-least-k over n positive literals, -1 = True:
//   kappa_0 = 1 - sum_{i>=k} C(n,i) / 2^(n-1)
//   kappa_s = C(n-1,k-1) [theta^(s-1)] (1+theta)^(n-k) (1-theta)^(k-1)
//             / (C(n-1,s-1) 2^(n-1))
std::vector<double> card_ge_kappa(std::size_t n, std::size_t k) {
  std::vector<double> kappa(n + 1, 0.0);
  const cpp_int two_pow = cpp_int(1) << (n - 1);

  const auto row_n = binomial_row(n);
  cpp_int tail = 0;
  for (std::size_t i = k; i <= n; ++i) tail += row_n[i];
  kappa[0] = to_double(two_pow - tail, two_pow);

  // (1+theta)^(n-k) (1-theta)^(k-1), exact.
  std::vector<cpp_int> poly{1};
  poly.reserve(n);
  auto multiply = [&poly](int sign) {
    poly.push_back(0);
    for (std::size_t j = poly.size() - 1; j > 0; --j) {
      if (sign > 0) {
        poly[j] += poly[j - 1];
      } else {
        poly[j] -= poly[j - 1];
      }
    }
  };
  for (std::size_t i = 0; i < n - k; ++i) multiply(+1);
  for (std::size_t i = 0; i + 1 < k; ++i) multiply(-1);

  const auto row_n1 = binomial_row(n - 1);
  const cpp_int& lead = row_n1[k - 1];
  for (std::size_t s = 1; s <= n; ++s) {
    kappa[s] = to_double(lead * poly[s - 1], row_n1[s - 1] * two_pow);
  }
  return kappa;
}

std::vector<double> nae_kappa(std::size_t n) {
  std::vector<double> kappa(n + 1, 0.0);
  const double even = std::ldexp(1.0, 2 - static_cast<int>(n));
  kappa[0] = even - 1.0;
  for (std::size_t s = 2; s <= n; s += 2) kappa[s] = even;
  return kappa;
}

// e'_s = e_s - b e'_{s-1}: the ESPs of the values with one entry b removed.
void deflate(std::span<const double> e, double b, std::span<double> out) {
  out[0] = 1.0;
  for (std::size_t s = 1; s < out.size(); ++s) out[s] = e[s] - b * out[s - 1];
}

double dot_shifted(const std::vector<double>& kappa, std::size_t shift,
                   std::span<const double> e) {
  double acc = 0.0;
  for (std::size_t s = shift; s < kappa.size(); ++s) {
    if (kappa[s] != 0.0) acc += kappa[s] * e[s - shift];
  }
  return acc;
}

struct Scratch {
  std::vector<double> b, e, q, q2;
  std::vector<double> p, diff, tri, dist, out;
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

void load_values(const ClauseSpectrum& s, std::span<const double> a,
                 std::vector<double>& b) {
  b.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) b[i] = s.signs[i] * a[s.vars[i]];
}

bool deflation_safe(const std::vector<double>& b) {
  return std::all_of(b.begin(), b.end(),
                     [](double v) { return std::abs(v) <= kDeflationLimit; });
}

double esp_condition(const std::vector<double>& kappa) {
  const std::size_t k = kappa.size() - 1;
  double binom = 1.0, cond = 0.0;
  for (std::size_t s = 0; s <= k; ++s) {
    cond += std::abs(kappa[s]) * binom;
    binom = binom * static_cast<double>(k - s) / static_cast<double>(s + 1);
  }
  return cond;
}

// Probability that each literal is True.
void load_probabilities(const ClauseSpectrum& s, std::span<const double> a,
                        std::vector<double>& p) {
  p.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    p[i] = std::clamp((1.0 - s.signs[i] * a[s.vars[i]]) / 2.0, 0.0, 1.0);
  }
}

// Distribution of the number of successes among independent Bernoullis.
void count_distribution(std::span<const double> p, std::vector<double>& dist) {
  dist.assign(p.size() + 1, 0.0);
  dist[0] = 1.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t t = i + 1; t > 0; --t) {
      dist[t] = (1.0 - p[i]) * dist[t] + p[i] * dist[t - 1];
    }
    dist[0] *= 1.0 - p[i];
  }
}

// out[i] = E[diff(T_{-i})], T_{-i} the count with Bernoulli i left out.
// diff has size k. Suffix expectations are kept in a triangle, prefix
// distributions are rolled forward.
void leave_one_out(std::span<const double> p, std::span<const double> diff,
                   Scratch& sc, std::span<double> out) {
  const std::size_t k = p.size();
  auto row = [](std::size_t i) { return i * (i + 1) / 2; };
  sc.tri.resize(row(k));
  std::copy(diff.begin(), diff.end(), sc.tri.begin() + row(k - 1));
  for (std::size_t i = k - 1; i > 0; --i) {
    const double* next = sc.tri.data() + row(i);
    double* cur = sc.tri.data() + row(i - 1);
    for (std::size_t a = 0; a < i; ++a) {
      cur[a] = p[i] * next[a + 1] + (1.0 - p[i]) * next[a];
    }
  }
  sc.dist.assign(k + 1, 0.0);
  sc.dist[0] = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double* d = sc.tri.data() + row(i);
    double acc = 0.0;
    for (std::size_t a = 0; a <= i; ++a) acc += sc.dist[a] * d[a];
    out[i] = acc;
    for (std::size_t t = i + 1; t > 0; --t) {
      sc.dist[t] = (1.0 - p[i]) * sc.dist[t] + p[i] * sc.dist[t - 1];
    }
    sc.dist[0] *= 1.0 - p[i];
  }
}

double count_value(const ClauseSpectrum& s, std::span<const double> a,
                   Scratch& sc) {
  load_probabilities(s, a, sc.p);
  count_distribution(sc.p, sc.dist);
  double acc = 0.0;
  for (std::size_t t = 0; t < sc.dist.size(); ++t) acc += s.by_count[t] * sc.dist[t];
  return acc;
}

std::vector<double> truth_by_count(const Clause& clause) {
  const std::size_t k = clause.literals.size();
  std::vector<double> f(k + 1);
  for (std::size_t t = 0; t <= k; ++t) {
    bool sat = false;
    switch (clause.kind) {
      case ClauseKind::Cnf: sat = t >= 1; break;
      case ClauseKind::CardGe: sat = t >= static_cast<std::size_t>(clause.threshold); break;
      case ClauseKind::Xor: sat = t % 2 == 1; break;
      case ClauseKind::Nae: sat = t > 0 && t < k; break;
      case ClauseKind::CardLe: sat = t <= static_cast<std::size_t>(clause.threshold); break;
    }
    f[t] = sat ? -1.0 : 1.0;
  }
  return f;
}

}  // namespace

ClauseSpectrum spectrum(const Clause& clause) {
  const std::size_t k = clause.literals.size();
  if (k == 0) throw std::invalid_argument("spectrum of an empty clause");
  if (k > kMaxClauseSize) {
    throw std::length_error("clause of size " + std::to_string(k) +
                            " exceeds the limit of " +
                            std::to_string(kMaxClauseSize));
  }
  ClauseSpectrum s;
  s.weight = clause.weight;
  s.vars.reserve(k);
  s.signs.reserve(k);
  for (const auto& lit : clause.literals) {
    s.vars.push_back(lit.var - 1);
    s.signs.push_back(lit.negated ? -1.0 : 1.0);
  }
  switch (clause.kind) {
    case ClauseKind::Cnf:
      s.kappa = card_ge_kappa(k, 1);
      break;
    case ClauseKind::CardGe:
      if (clause.threshold < 1 || static_cast<std::size_t>(clause.threshold) > k) {
        throw std::invalid_argument("constant cardinality clause has no spectrum");
      }
      s.kappa = card_ge_kappa(k, static_cast<std::size_t>(clause.threshold));
      break;
    case ClauseKind::Xor:
      s.kappa.assign(k + 1, 0.0);
      s.kappa[k] = 1.0;
      break;
    case ClauseKind::Nae:
      if (k < 2) throw std::invalid_argument("constant NAE clause has no spectrum");
      s.kappa = nae_kappa(k);
      break;
    case ClauseKind::CardLe:
      throw std::invalid_argument("CARD_LE must be normalized to CARD_GE first");
  }
  s.by_count = truth_by_count(clause);
  s.count_eval = esp_condition(s.kappa) > kConditionLimit;
  return s;
}

void elementary_symmetric(std::span<const double> values, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  out[0] = 1.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    for (std::size_t s = i + 1; s > 0; --s) out[s] += v * out[s - 1];
  }
}

std::vector<double> esp_coeffs(std::span<const double> values) {
  std::vector<double> e(values.size() + 1);
  elementary_symmetric(values, e);
  std::reverse(e.begin(), e.end());
  return e;
}

double eval_clause(const ClauseSpectrum& s, std::span<const double> a) {
  auto& sc = scratch();
  if (s.count_eval) return count_value(s, a, sc);
  load_values(s, a, sc.b);
  sc.e.resize(s.size() + 1);
  elementary_symmetric(sc.b, sc.e);
  return dot_shifted(s.kappa, 0, sc.e);
}

// ---------------------------------------------------------------------------

ObjectiveContext::ObjectiveContext(const Formula& f, std::vector<double> weights)
    : n_(f.n), m_(f.clauses.size()), weights_(std::move(weights)) {
  if (weights_.size() != m_) {
    throw std::invalid_argument("one weight per clause required");
  }
  min_weight_ = m_ ? weights_.front() : 0.0;
  normalized_.reserve(m_);
  for (std::size_t c = 0; c < m_; ++c) {
    const double w = weights_[c];
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("clause weights must be positive");
    }
    total_weight_ += w;
    min_weight_ = std::min(min_weight_, w);
    auto norm = normalize_clause(f.clauses[c], f.n);
    if (std::holds_alternative<ConstTrue>(norm)) {
      constant_term_ -= w;
    } else if (std::holds_alternative<ConstFalse>(norm)) {
      constant_term_ += w;
      ++const_false_count_;
    } else {
      auto sp = spectrum(std::get<Clause>(norm));
      sp.weight = w;
      active_weight_ += w;
      spectra_.push_back(std::move(sp));
    }
    normalized_.push_back(std::move(norm));
  }
}

double ObjectiveContext::value(std::span<const double> a) const {
  double total = constant_term_;
  for (const auto& s : spectra_) total += s.weight * eval_clause(s, a);
  return total;
}

void ObjectiveContext::gradient(std::span<const double> a,
                                std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  auto& sc = scratch();
  for (const auto& s : spectra_) {
    const std::size_t k = s.size();
    load_values(s, a, sc.b);
    if (s.count_eval || !deflation_safe(sc.b)) {
      load_probabilities(s, a, sc.p);
      sc.diff.resize(k);
      for (std::size_t t = 0; t < k; ++t) sc.diff[t] = s.by_count[t + 1] - s.by_count[t];
      sc.out.resize(k);
      leave_one_out(sc.p, sc.diff, sc, sc.out);
      for (std::size_t i = 0; i < k; ++i) {
        out[s.vars[i]] -= 0.5 * s.weight * s.signs[i] * sc.out[i];
      }
      continue;
    }
    sc.e.resize(k + 1);
    sc.q.resize(k);
    elementary_symmetric(sc.b, sc.e);
    for (std::size_t i = 0; i < k; ++i) {
      deflate(sc.e, sc.b[i], sc.q);
      out[s.vars[i]] += s.weight * s.signs[i] * dot_shifted(s.kappa, 1, sc.q);
    }
  }
}

std::vector<double> ObjectiveContext::gradient(std::span<const double> a) const {
  std::vector<double> g(a.size());
  gradient(a, g);
  return g;
}

SymMatrix ObjectiveContext::hessian_restricted(std::span<const double> a,
                                               std::span<const int> J) const {
  SymMatrix H(J.size());
  if (J.size() < 2) return H;
  std::vector<int> slot(static_cast<std::size_t>(n_), -1);
  for (std::size_t r = 0; r < J.size(); ++r) slot[J[r]] = static_cast<int>(r);

  auto& sc = scratch();
  std::vector<std::size_t> members;
  for (const auto& s : spectra_) {
    const std::size_t k = s.size();
    members.clear();
    for (std::size_t i = 0; i < k; ++i) {
      if (slot[s.vars[i]] >= 0) members.push_back(i);
    }
    if (members.size() < 2) continue;
    load_values(s, a, sc.b);
    if (s.count_eval || !deflation_safe(sc.b)) {
      // Second differences of the count table, then leave-one-out over the
      // k - 1 literals that remain once i is fixed.
      std::vector<double> d2(k - 1), rest(k - 1), h(k - 1);
      for (std::size_t t = 0; t + 1 < k; ++t) {
        d2[t] = s.by_count[t + 2] - 2.0 * s.by_count[t + 1] + s.by_count[t];
      }
      load_probabilities(s, a, sc.p);
      for (std::size_t p = 0; p < members.size(); ++p) {
        const std::size_t i = members[p];
        std::copy(sc.p.begin(), sc.p.begin() + i, rest.begin());
        std::copy(sc.p.begin() + i + 1, sc.p.end(), rest.begin() + i);
        leave_one_out(rest, d2, sc, h);
        for (std::size_t r = p + 1; r < members.size(); ++r) {
          const std::size_t j = members[r];
          const double v = 0.25 * s.weight * s.signs[i] * s.signs[j] * h[j - 1];
          H.add_symmetric(static_cast<std::size_t>(slot[s.vars[i]]),
                          static_cast<std::size_t>(slot[s.vars[j]]), v);
        }
      }
      continue;
    }
    sc.e.resize(k + 1);
    elementary_symmetric(sc.b, sc.e);
    sc.q.resize(k);
    sc.q2.resize(k - 1);
    for (std::size_t p = 0; p < members.size(); ++p) {
      const std::size_t i = members[p];
      deflate(sc.e, sc.b[i], sc.q);
      for (std::size_t r = p + 1; r < members.size(); ++r) {
        const std::size_t j = members[r];
        deflate(sc.q, sc.b[j], sc.q2);
        const double h =
            s.weight * s.signs[i] * s.signs[j] * dot_shifted(s.kappa, 2, sc.q2);
        H.add_symmetric(static_cast<std::size_t>(slot[s.vars[i]]),
                        static_cast<std::size_t>(slot[s.vars[j]]), h);
      }
    }
  }
  return H;
}

}  // namespace mlsat
