#pragma once

// Seeded generators for three benchmark families: cubic-graph vertex cover,
// noisy parity learning and random CNF/XOR/cardinality hybrids.
//
// Every generator is a pure function of its parameters and seed. Metadata is
// a JSON object; attach_metadata() stores it in the formula as a
// "c meta {...}" comment so generated files are self-describing.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mlsat/formula.hpp"

namespace mlsat {

struct Generated {
  Formula formula;
  std::string metadata;  // JSON object text
  std::optional<BooleanAssignment> certificate;
  std::size_t target_satisfied = 0;  // all clauses unless noise was injected
};

inline constexpr int kMaxVertexCoverVertices = 30;
inline constexpr int kMaxParityVars = 24;

/// Vertex variable i is True iff vertex i is in the cover. One CNF clause per
/// edge plus CARD_LE(ceil(1.1 * Opt)) over all vertices. Opt is computed
/// exactly, so n_vertices is limited to kMaxVertexCoverVertices.
Generated gen_vertex_cover(int n_vertices, std::uint64_t seed,
                           int max_retries = 10000);

/// Exact vertex cover number of a simple graph on vertices 0..n-1.
int min_vertex_cover(int n, const std::vector<std::pair<int, int>>& edges,
                     std::vector<int>* cover = nullptr);

enum class ParityNoise { ExactCount, Bernoulli };

/// Hidden nonempty subset S of N variables and m = 2N nonzero samples, each
/// an XOR clause "sum of S over the sample's support = label". ExactCount
/// flips floor(e * m) labels; Bernoulli flips each with probability e.
Generated gen_parity_learning(int n, double e, std::uint64_t seed,
                              ParityNoise noise = ParityNoise::ExactCount);

/// ceil(r n) 3-CNF clauses, ceil(s n) XORs of ceil(l n) distinct variables
/// each, and one CARD_LE(ceil(k n)) over all n variables.
Generated gen_random_hybrid(int n, double r, double s, double l, double k,
                            std::uint64_t seed);

void attach_metadata(Formula& f, const std::string& json);
/// The first "meta" comment, if any.
std::optional<std::string> find_metadata(const Formula& f);

/// Certificate stored under "certificate" in the metadata (a model in the
/// signed-integer convention), if present.
std::optional<BooleanAssignment> certificate_from_metadata(const std::string& json,
                                                           int n);

}  // namespace mlsat
