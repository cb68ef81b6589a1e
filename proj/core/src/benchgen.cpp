#include "mlsat/benchgen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "mlsat/random.hpp"

namespace mlsat {

using nlohmann::json;

namespace {

constexpr std::string_view kMetaTag = "meta ";

// ceil with slack for products such as 0.3 * 20 that land just above an
// integer in binary floating point.
std::size_t ceil_count(double x) {
  return static_cast<std::size_t>(std::ceil(x - 1e-9));
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[uniform_below(rng, i)]);
  }
}

// k distinct values from [0, n), in sampled order.
std::vector<int> sample_distinct(int n, std::size_t k, Rng& rng) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + uniform_below(rng, pool.size() - i)]);
  }
  pool.resize(k);
  return pool;
}

json model_json(const BooleanAssignment& b) {
  json out = json::array();
  for (std::size_t i = 0; i < b.size(); ++i) {
    const int v = static_cast<int>(i) + 1;
    out.push_back(b[i] < 0 ? -v : v);
  }
  return out;
}

Clause card_le_all(int n, std::size_t k) {
  Clause c;
  c.kind = ClauseKind::CardLe;
  c.threshold = static_cast<int>(k);
  for (int v = 1; v <= n; ++v) c.literals.push_back({v, false});
  return c;
}

}  // namespace

int min_vertex_cover(int n, const std::vector<std::pair<int, int>>& edges,
                     std::vector<int>* cover) {
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  std::vector<char> best_in(in);
  int best = n + 1;
  // Branch on the first uncovered edge: one of its endpoints must be taken.
  std::function<void(int)> search = [&](int size) {
    if (size >= best) return;
    const auto open = std::find_if(edges.begin(), edges.end(), [&](const auto& e) {
      return !in[e.first] && !in[e.second];
    });
    if (open == edges.end()) {
      best = size;
      best_in = in;
      return;
    }
    for (int v : {open->first, open->second}) {
      in[v] = 1;
      search(size + 1);
      in[v] = 0;
    }
  };
  search(0);
  if (cover) {
    cover->clear();
    for (int v = 0; v < n; ++v) {
      if (best_in[v]) cover->push_back(v);
    }
  }
  return best;
}

Generated gen_vertex_cover(int n_vertices, std::uint64_t seed, int max_retries) {
  if (n_vertices < 4 || n_vertices % 2 != 0) {
    throw std::invalid_argument("vertex cover: n_vertices must be even and >= 4");
  }
  if (n_vertices > kMaxVertexCoverVertices) {
    throw std::invalid_argument("vertex cover: n_vertices above exact-search cap (30)");
  }
  Rng rng = make_rng(seed, 0);
  std::vector<std::pair<int, int>> edges;
  bool ok = false;
  for (int attempt = 0; attempt < max_retries && !ok; ++attempt) {
    std::vector<int> stubs;
    for (int v = 0; v < n_vertices; ++v) stubs.insert(stubs.end(), 3, v);
    shuffle(stubs, rng);
    edges.clear();
    std::set<std::pair<int, int>> seen;
    ok = true;
    for (std::size_t i = 0; i < stubs.size(); i += 2) {
      auto [u, v] = std::minmax(stubs[i], stubs[i + 1]);
      if (u == v || !seen.insert({u, v}).second) {
        ok = false;
        break;
      }
      edges.emplace_back(u, v);
    }
  }
  if (!ok) throw std::runtime_error("vertex cover: configuration model retry cap exceeded");
  std::sort(edges.begin(), edges.end());

  std::vector<int> cover;
  const int opt = min_vertex_cover(n_vertices, edges, &cover);
  const std::size_t k = static_cast<std::size_t>((11 * opt + 9) / 10);

  Generated g;
  g.formula.n = n_vertices;
  for (auto [u, v] : edges) {
    Clause c;
    c.literals = {{u + 1, false}, {v + 1, false}};
    g.formula.clauses.push_back(std::move(c));
  }
  g.formula.clauses.push_back(card_le_all(n_vertices, k));
  BooleanAssignment cert(static_cast<std::size_t>(n_vertices), 1);
  for (int v : cover) cert.set(v, -1);
  g.certificate = cert;
  g.target_satisfied = g.formula.m();

  json edge_list = json::array();
  for (auto [u, v] : edges) edge_list.push_back({u + 1, v + 1});
  g.metadata = json{{"family", "vertex_cover"},
                    {"seed", seed},
                    {"n_vertices", n_vertices},
                    {"opt", opt},
                    {"k", k},
                    {"edges", edge_list},
                    {"target_satisfied", g.target_satisfied},
                    {"certificate", model_json(cert)}}
                   .dump();
  attach_metadata(g.formula, g.metadata);
  return g;
}

Generated gen_parity_learning(int n, double e, std::uint64_t seed, ParityNoise noise) {
  if (n < 1 || n > kMaxParityVars) {
    throw std::invalid_argument("parity: N must be in [1, 24]");
  }
  if (!(e >= 0.0 && e < 0.5)) throw std::invalid_argument("parity: e must be in [0, 1/2)");
  Rng rng = make_rng(seed, 1);
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::uint64_t hidden = 0;
  while (hidden == 0) hidden = uniform_below(rng, full + 1);

  const std::size_t m = 2 * static_cast<std::size_t>(n);
  std::vector<std::uint64_t> samples(m);
  std::vector<int> labels(m);
  for (std::size_t j = 0; j < m; ++j) {
    samples[j] = 1 + uniform_below(rng, full);  // nonzero
    labels[j] = std::popcount(samples[j] & hidden) & 1;
  }
  std::vector<std::size_t> flipped;
  if (noise == ParityNoise::ExactCount) {
    const auto flips = static_cast<std::size_t>(std::floor(e * static_cast<double>(m)));
    std::vector<int> order = sample_distinct(static_cast<int>(m), flips, rng);
    flipped.assign(order.begin(), order.end());
  } else {
    for (std::size_t j = 0; j < m; ++j) {
      if (uniform01(rng) < e) flipped.push_back(j);
    }
  }
  std::sort(flipped.begin(), flipped.end());
  for (std::size_t j : flipped) labels[j] ^= 1;

  Generated g;
  g.formula.n = n;
  for (std::size_t j = 0; j < m; ++j) {
    Clause c;
    c.kind = ClauseKind::Xor;
    for (int v = 0; v < n; ++v) {
      if ((samples[j] >> v) & 1U) c.literals.push_back({v + 1, false});
    }
    // An XOR clause holds on an odd number of True literals; a 0 label asks
    // for even parity, so negate one literal.
    if (labels[j] == 0) c.literals.front().negated = true;
    g.formula.clauses.push_back(std::move(c));
  }
  BooleanAssignment cert(static_cast<std::size_t>(n), 1);
  json subset = json::array();
  for (int v = 0; v < n; ++v) {
    if ((hidden >> v) & 1U) {
      cert.set(v, -1);
      subset.push_back(v + 1);
    }
  }
  g.certificate = cert;
  g.target_satisfied = m - flipped.size();

  json flips = json::array();
  for (std::size_t j : flipped) flips.push_back(j + 1);
  g.metadata = json{{"family", "parity"},
                    {"seed", seed},
                    {"N", n},
                    {"e", e},
                    {"noise", noise == ParityNoise::ExactCount ? "exact" : "bernoulli"},
                    {"hidden_subset", subset},
                    {"flipped_samples", flips},
                    {"target_satisfied", g.target_satisfied},
                    {"certificate", model_json(cert)}}
                   .dump();
  attach_metadata(g.formula, g.metadata);
  return g;
}

Generated gen_random_hybrid(int n, double r, double s, double l, double k,
                            std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("hybrid: n must be >= 3");
  if (r < 0 || s < 0 || k < 0) throw std::invalid_argument("hybrid: negative parameter");
  const std::size_t cnf = ceil_count(r * n);
  const std::size_t xors = ceil_count(s * n);
  const std::size_t xor_len = ceil_count(l * n);
  const std::size_t card = ceil_count(k * n);
  if (xor_len < 1) throw std::invalid_argument("hybrid: XOR length ceil(l n) < 1");
  if (xor_len > static_cast<std::size_t>(n)) {
    throw std::invalid_argument("hybrid: XOR length exceeds n");
  }

  Rng rng = make_rng(seed, 2);
  Generated g;
  g.formula.n = n;
  auto random_clause = [&](ClauseKind kind, std::size_t len) {
    Clause c;
    c.kind = kind;
    for (int v : sample_distinct(n, len, rng)) {
      c.literals.push_back({v + 1, uniform_below(rng, 2) == 1});
    }
    return c;
  };
  for (std::size_t i = 0; i < cnf; ++i) {
    g.formula.clauses.push_back(random_clause(ClauseKind::Cnf, 3));
  }
  for (std::size_t i = 0; i < xors; ++i) {
    g.formula.clauses.push_back(random_clause(ClauseKind::Xor, xor_len));
  }
  g.formula.clauses.push_back(card_le_all(n, card));
  g.target_satisfied = g.formula.m();
  g.metadata = json{{"family", "hybrid"},
                    {"seed", seed},
                    {"n", n},
                    {"r", r},
                    {"s", s},
                    {"l", l},
                    {"k", k},
                    {"cnf_clauses", cnf},
                    {"xor_clauses", xors},
                    {"xor_length", xor_len},
                    {"card_bound", card},
                    {"target_satisfied", g.target_satisfied}}
                   .dump();
  attach_metadata(g.formula, g.metadata);
  return g;
}

void attach_metadata(Formula& f, const std::string& json_text) {
  f.comments.push_back(std::string(kMetaTag) + json_text);
}

std::optional<std::string> find_metadata(const Formula& f) {
  for (const auto& c : f.comments) {
    if (c.starts_with(kMetaTag)) return c.substr(kMetaTag.size());
  }
  return std::nullopt;
}

std::optional<BooleanAssignment> certificate_from_metadata(const std::string& text,
                                                           int n) {
  const json meta = json::parse(text);
  if (!meta.contains("certificate")) return std::nullopt;
  std::string model = "v";
  for (const auto& lit : meta["certificate"]) model += " " + std::to_string(lit.get<int>());
  model += " 0";
  return parse_model(model, n);
}

}  // namespace mlsat
