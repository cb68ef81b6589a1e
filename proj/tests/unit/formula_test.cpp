#include "mlsat/formula.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace mlsat;
using mlsat::testing::make_clause;

namespace {

// All assignments of variables 1..n, as BooleanAssignments.
std::vector<BooleanAssignment> cube(int n) {
  std::vector<BooleanAssignment> out;
  for (unsigned bits = 0; bits < (1U << n); ++bits) {
    std::vector<std::int8_t> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[i] = (bits >> i) & 1U ? -1 : 1;
    out.emplace_back(std::move(v));
  }
  return out;
}

}  // namespace

TEST(ParseFormula, CnfAndXor) {
  auto f = parse_formula("p hybrid 3 2\n1 2 0\nx 1 2 3 0\n");
  EXPECT_EQ(f.n, 3);
  ASSERT_EQ(f.m(), 2u);
  EXPECT_EQ(f.clauses[0], make_clause(ClauseKind::Cnf, {1, 2}));
  EXPECT_EQ(f.clauses[1], make_clause(ClauseKind::Xor, {1, 2, 3}));
}

TEST(ParseFormula, Cardinality) {
  auto f = parse_formula("p hybrid 3 1\nd >= 2 1 2 3 0\n");
  ASSERT_EQ(f.m(), 1u);
  EXPECT_EQ(f.clauses[0], make_clause(ClauseKind::CardGe, {1, 2, 3}, 2));
  auto g = parse_formula("p hybrid 3 1\nd <= 1 -1 2 3 0\n");
  EXPECT_EQ(g.clauses[0], make_clause(ClauseKind::CardLe, {-1, 2, 3}, 1));
}

TEST(ParseFormula, TautologyNormalizesToConstTrue) {
  auto f = parse_formula("p hybrid 2 1\n1 -1 0\n");
  ASSERT_EQ(f.m(), 1u);
  EXPECT_TRUE(std::holds_alternative<ConstTrue>(normalize_clause(f.clauses[0], f.n)));
}

TEST(ParseFormula, WeightsNaeCommentsAndDimacs) {
  auto f = parse_formula(
      "c a comment\np hybrid 3 3\nw 2.5 1 -3 0\nn 1 2 3 0\nw 4 x -2 3 0\n");
  ASSERT_EQ(f.m(), 3u);
  EXPECT_TRUE(f.has_explicit_weights());
  EXPECT_DOUBLE_EQ(f.clauses[0].weight, 2.5);
  EXPECT_TRUE(f.clauses[0].explicit_weight);
  EXPECT_EQ(f.clauses[1].kind, ClauseKind::Nae);
  EXPECT_FALSE(f.clauses[1].explicit_weight);
  EXPECT_EQ(f.clauses[2].kind, ClauseKind::Xor);
  EXPECT_DOUBLE_EQ(f.clauses[2].weight, 4.0);
  ASSERT_EQ(f.comments.size(), 1u);
  EXPECT_EQ(f.comments[0], "a comment");

  auto d = parse_formula("p cnf 3 2\n1 -2\n 3 0\n-1 0\n");
  ASSERT_EQ(d.m(), 2u);
  EXPECT_EQ(d.clauses[0], make_clause(ClauseKind::Cnf, {1, -2, 3}));
  EXPECT_FALSE(d.has_explicit_weights());
}

TEST(ParseFormula, OutOfRangeThresholdIsKept) {
  auto f = parse_formula("p hybrid 2 1\nd >= 5 1 2 0\n");
  EXPECT_EQ(f.clauses[0].threshold, 5);
  EXPECT_TRUE(std::holds_alternative<ConstFalse>(normalize_clause(f.clauses[0], 2)));
}

TEST(ParseFormula, Errors) {
  auto line_of = [](std::string_view text) -> std::size_t {
    try {
      parse_formula(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("p hybrid 2 1\n1 3 0\n"), 2u);        // var > n
  EXPECT_NE(line_of("p hybrid 2 1\n1 0 \nx 0 1 2 0\n"), 0u);  // var 0 / extra clause
  EXPECT_EQ(line_of("p hybrid 2 1\nd >= two 1 2 0\n"), 2u);  // malformed threshold
  EXPECT_EQ(line_of("p hybrid 2 1\nd => 1 1 2 0\n"), 2u);
  EXPECT_EQ(line_of("p hybrid 2 1\nw -1 1 0\n"), 2u);     // non-positive weight
  EXPECT_EQ(line_of("1 2 0\n"), 1u);                       // missing header
  EXPECT_NE(line_of("p hybrid 2 2\n1 0\n"), 0u);           // clause count mismatch
  EXPECT_NE(line_of("p hybrid 2 0\n"), 0u);                // empty formula
}

TEST(NormalizeClause, CardLeBecomesCardGeOverNegations) {
  auto n = normalize_clause(make_clause(ClauseKind::CardLe, {1, 2, 3}, 1), 3);
  ASSERT_TRUE(std::holds_alternative<Clause>(n));
  EXPECT_EQ(std::get<Clause>(n), make_clause(ClauseKind::CardGe, {-1, -2, -3}, 2));
}

TEST(NormalizeClause, VacuousAndImpossibleThresholds) {
  EXPECT_TRUE(std::holds_alternative<ConstTrue>(
      normalize_clause(make_clause(ClauseKind::CardGe, {1, 2}, 0), 2)));
  EXPECT_TRUE(std::holds_alternative<ConstFalse>(
      normalize_clause(make_clause(ClauseKind::CardGe, {1, 2}, 3), 2)));
  EXPECT_TRUE(std::holds_alternative<ConstTrue>(
      normalize_clause(make_clause(ClauseKind::CardLe, {1, 2}, 2), 2)));
}

TEST(NormalizeClause, XorDuplicatesCancel) {
  auto n = normalize_clause(make_clause(ClauseKind::Xor, {1, 1, 2}), 2);
  ASSERT_TRUE(std::holds_alternative<Clause>(n));
  EXPECT_EQ(std::get<Clause>(n), make_clause(ClauseKind::Xor, {2}));
  // x1 xor !x1 is always True.
  EXPECT_TRUE(std::holds_alternative<ConstTrue>(
      normalize_clause(make_clause(ClauseKind::Xor, {1, -1}), 1)));
  EXPECT_TRUE(std::holds_alternative<ConstFalse>(
      normalize_clause(make_clause(ClauseKind::Xor, {1, 1}), 1)));
}

TEST(NormalizeClause, RejectsDuplicatesInCardAndNae) {
  EXPECT_THROW(normalize_clause(make_clause(ClauseKind::CardGe, {1, -1}, 1), 1),
               FormulaError);
  EXPECT_THROW(normalize_clause(make_clause(ClauseKind::Nae, {1, 2, 1}), 2), FormulaError);
  EXPECT_THROW(normalize_clause(make_clause(ClauseKind::Cnf, {1, 4}), 3), FormulaError);
}

TEST(NormalizeClause, TruthTableEquivalenceAndIdempotence) {
  Rng rng = make_rng(11);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 1 + static_cast<int>(uniform_below(rng, 6));
    Clause c;
    c.kind = static_cast<ClauseKind>(uniform_below(rng, 5));
    const int k = 1 + static_cast<int>(uniform_below(rng, 6));
    for (int i = 0; i < k; ++i) {
      c.literals.push_back({1 + static_cast<int>(uniform_below(rng, n)),
                            uniform_below(rng, 2) == 1});
    }
    c.threshold = static_cast<int>(uniform_below(rng, k + 2)) - 1;
    NormalizedClause nc;
    try {
      nc = normalize_clause(c, n);
    } catch (const FormulaError&) {
      EXPECT_TRUE(c.is_card() || c.kind == ClauseKind::Nae);
      continue;
    }
    for (const auto& b : cube(n)) {
      ASSERT_EQ(clause_satisfied(c, b), clause_satisfied(nc, b))
          << serialize_clause(c);
    }
    if (const auto* inner = std::get_if<Clause>(&nc)) {
      EXPECT_EQ(normalize_clause(*inner, n), nc);
    }
  }
}

TEST(ClauseSatisfied, Semantics) {
  BooleanAssignment b(std::vector<std::int8_t>{-1, 1, -1});  // x1, x3 True
  EXPECT_TRUE(clause_satisfied(make_clause(ClauseKind::Cnf, {2, 3}), b));
  EXPECT_FALSE(clause_satisfied(make_clause(ClauseKind::Cnf, {2, -1}), b));
  EXPECT_FALSE(clause_satisfied(make_clause(ClauseKind::Xor, {1, 3}), b));
  EXPECT_TRUE(clause_satisfied(make_clause(ClauseKind::Xor, {1, 2}), b));
  EXPECT_TRUE(clause_satisfied(make_clause(ClauseKind::CardGe, {1, 2, 3}, 2), b));
  EXPECT_FALSE(clause_satisfied(make_clause(ClauseKind::CardLe, {1, 2, 3}, 1), b));
  EXPECT_TRUE(clause_satisfied(make_clause(ClauseKind::Nae, {1, 2}), b));
  EXPECT_FALSE(clause_satisfied(make_clause(ClauseKind::Nae, {1, 3}), b));
}

TEST(SerializeFormula, Emission) {
  Formula f;
  f.n = 2;
  f.clauses.push_back(make_clause(ClauseKind::Cnf, {1, 2}));
  EXPECT_EQ(serialize_formula(f), "p hybrid 2 1\n1 2 0\n");
  f.clauses[0].weight = 3;
  f.clauses[0].explicit_weight = true;
  EXPECT_EQ(serialize_formula(f), "p hybrid 2 1\nw 3 1 2 0\n");
}

TEST(SerializeFormula, RoundTrip) {
  Rng rng = make_rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto f = mlsat::testing::random_formula(8, 12, 6, rng);
    f.clauses[0].weight = 0.1 + trial;
    f.clauses[0].explicit_weight = true;
    f.comments.push_back("trial " + std::to_string(trial));
    const auto text = serialize_formula(f);
    const auto g = parse_formula(text);
    EXPECT_EQ(g.n, f.n);
    EXPECT_EQ(g.clauses, f.clauses);
    EXPECT_EQ(g.comments, f.comments);
    EXPECT_EQ(serialize_formula(g), text);
  }
}

TEST(Model, LineAndParse) {
  BooleanAssignment b(std::vector<std::int8_t>{-1, 1, 1, -1});
  EXPECT_EQ(model_line(b), "v -1 2 3 -4 0");
  EXPECT_EQ(parse_model("s SATISFIABLE\nv -1 2\nv 3 -4 0\n", 4), b);
  EXPECT_EQ(parse_model("-1 2 3 -4 0", 4), b);
  EXPECT_THROW(parse_model("v -1 2 3 0", 4), std::runtime_error);     // missing var
  EXPECT_THROW(parse_model("v 1 -1 2 3 4 0", 4), std::runtime_error); // repeated var
  EXPECT_THROW(parse_model("v 1 2 3 5 0", 4), std::runtime_error);    // out of range
}
