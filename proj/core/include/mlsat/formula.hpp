#pragma once

// Hybrid Boolean formulas: CNF, XOR, cardinality and not-all-equal clauses.
//
// Sign convention used everywhere in mlsat: the value -1 encodes True and
// +1 encodes False. A clause's Fourier expansion is -1 exactly on the
// assignments that satisfy it.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mlsat {

enum class ClauseKind { Cnf, Xor, CardGe, CardLe, Nae };

std::string_view to_string(ClauseKind kind);

/// A possibly negated variable. `var` is 1-based.
struct Literal {
  int var = 0;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// One hybrid constraint. `threshold` is only meaningful for CardGe/CardLe.
///
/// `explicit_weight` records whether the weight came from a "w" prefix in the
/// input; default_weights() uses it to decide whether a file is weighted.
struct Clause {
  ClauseKind kind = ClauseKind::Cnf;
  std::vector<Literal> literals;
  int threshold = 0;
  double weight = 1.0;
  bool explicit_weight = false;

  bool is_card() const {
    return kind == ClauseKind::CardGe || kind == ClauseKind::CardLe;
  }
  std::size_t size() const { return literals.size(); }

  friend bool operator==(const Clause&, const Clause&) = default;
};

struct Formula {
  int n = 0;
  std::vector<Clause> clauses;
  std::vector<std::string> comments;

  std::size_t m() const { return clauses.size(); }
  bool has_explicit_weights() const;
};

/// A point of {-1,+1}^n. Index 0 holds variable 1.
class BooleanAssignment {
 public:
  BooleanAssignment() = default;
  explicit BooleanAssignment(std::size_t n, std::int8_t fill = 1)
      : values_(n, fill) {}
  explicit BooleanAssignment(std::vector<std::int8_t> values);

  std::size_t size() const { return values_.size(); }
  std::int8_t operator[](std::size_t i) const { return values_[i]; }
  void set(std::size_t i, std::int8_t v);

  /// True iff the 1-based variable `var` is assigned True (-1).
  bool is_true(int var) const { return values_[var - 1] < 0; }
  bool literal_true(const Literal& lit) const {
    return is_true(lit.var) != lit.negated;
  }

  const std::vector<std::int8_t>& values() const { return values_; }
  std::vector<double> as_reals() const;

  friend bool operator==(const BooleanAssignment&,
                         const BooleanAssignment&) = default;

 private:
  std::vector<std::int8_t> values_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Raised for clauses whose semantics are undefined (duplicate variables in
/// CARD/NAE) or that reference variables outside [1, n].
class FormulaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConstTrue {
  double weight = 1.0;
  friend bool operator==(const ConstTrue&, const ConstTrue&) = default;
};
struct ConstFalse {
  double weight = 1.0;
  friend bool operator==(const ConstFalse&, const ConstFalse&) = default;
};

using NormalizedClause = std::variant<Clause, ConstTrue, ConstFalse>;

/// Resolves duplicate variables, rewrites CardLe as CardGe over negated
/// literals and folds constant clauses.
///
/// The result is idempotent: normalizing a returned Clause yields it again.
/// Throws FormulaError for duplicate variables in CARD/NAE clauses or for
/// variables outside [1, n].
NormalizedClause normalize_clause(const Clause& clause, int n);

/// Truth-table semantics of a clause (works on raw or normalized clauses).
bool clause_satisfied(const Clause& clause, const BooleanAssignment& b);
bool clause_satisfied(const NormalizedClause& clause,
                      const BooleanAssignment& b);

/// Parses the hybrid text format (or plain "p cnf" DIMACS).
Formula parse_formula(std::string_view text);
Formula read_formula_file(const std::string& path);

std::string serialize_formula(const Formula& f);
std::string serialize_clause(const Clause& c);

/// Model line in SAT-competition style: "v -1 2 ... 0". A negative literal
/// -i means variable i is True.
std::string model_line(const BooleanAssignment& b);

/// Reads a model from text: all integers on "v" lines (or on bare integer
/// lines), terminated by 0. Every variable 1..n must be assigned exactly once.
BooleanAssignment parse_model(std::string_view text, int n);

}  // namespace mlsat
