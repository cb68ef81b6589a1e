#include "mlsat/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace mlsat {

std::string_view to_string(ClauseKind kind) {
  switch (kind) {
    case ClauseKind::Cnf: return "CNF";
    case ClauseKind::Xor: return "XOR";
    case ClauseKind::CardGe: return "CARD_GE";
    case ClauseKind::CardLe: return "CARD_LE";
    case ClauseKind::Nae: return "NAE";
  }
  return "?";
}

bool Formula::has_explicit_weights() const {
  return std::any_of(clauses.begin(), clauses.end(),
                     [](const Clause& c) { return c.explicit_weight; });
}

BooleanAssignment::BooleanAssignment(std::vector<std::int8_t> values)
    : values_(std::move(values)) {
  for (auto v : values_) {
    if (v != 1 && v != -1) {
      throw std::invalid_argument("BooleanAssignment entries must be +-1");
    }
  }
}

void BooleanAssignment::set(std::size_t i, std::int8_t v) {
  if (v != 1 && v != -1) {
    throw std::invalid_argument("BooleanAssignment entries must be +-1");
  }
  values_.at(i) = v;
}

std::vector<double> BooleanAssignment::as_reals() const {
  return {values_.begin(), values_.end()};
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

// ---------------------------------------------------------------------------
// normalization

namespace {

void check_range(const Clause& clause, int n) {
  for (const auto& lit : clause.literals) {
    if (lit.var < 1 || lit.var > n) {
      throw FormulaError("variable " + std::to_string(lit.var) +
                         " outside [1, " + std::to_string(n) + "]");
    }
  }
}

void reject_duplicates(const Clause& clause) {
  std::vector<int> vars;
  vars.reserve(clause.literals.size());
  for (const auto& lit : clause.literals) vars.push_back(lit.var);
  std::sort(vars.begin(), vars.end());
  if (std::adjacent_find(vars.begin(), vars.end()) != vars.end()) {
    throw FormulaError(std::string("duplicate variable in ") +
                       std::string(to_string(clause.kind)) + " clause");
  }
}

NormalizedClause normalize_cnf(const Clause& clause) {
  Clause out = clause;
  out.literals.clear();
  for (const auto& lit : clause.literals) {
    auto same_var = std::find_if(
        out.literals.begin(), out.literals.end(),
        [&](const Literal& l) { return l.var == lit.var; });
    if (same_var == out.literals.end()) {
      out.literals.push_back(lit);
    } else if (same_var->negated != lit.negated) {
      return ConstTrue{clause.weight};
    }
  }
  if (out.literals.empty()) return ConstFalse{clause.weight};
  return out;
}

// x xor x = False and (not x) = x xor True, so an XOR over literals equals the
// XOR over variables of odd multiplicity, flipped by the number of negations.
NormalizedClause normalize_xor(const Clause& clause) {
  std::vector<int> order;
  std::unordered_map<int, int> count;
  bool flip = false;
  for (const auto& lit : clause.literals) {
    if (count[lit.var]++ == 0) order.push_back(lit.var);
    flip ^= lit.negated;
  }
  Clause out = clause;
  out.literals.clear();
  for (int v : order) {
    if (count[v] % 2 == 1) out.literals.push_back(Literal{v, false});
  }
  if (out.literals.empty()) {
    if (flip) return ConstTrue{clause.weight};
    return ConstFalse{clause.weight};
  }
  out.literals.front().negated = flip;
  return out;
}

NormalizedClause normalize_card(const Clause& clause) {
  reject_duplicates(clause);
  Clause out = clause;
  const int size = static_cast<int>(clause.literals.size());
  if (clause.kind == ClauseKind::CardLe) {
    // #True(L) <= k  <=>  #True(not L) >= |L| - k
    out.kind = ClauseKind::CardGe;
    out.threshold = size - clause.threshold;
    for (auto& lit : out.literals) lit.negated = !lit.negated;
  }
  if (out.threshold <= 0) return ConstTrue{clause.weight};
  if (out.threshold > size) return ConstFalse{clause.weight};
  return out;
}

NormalizedClause normalize_nae(const Clause& clause) {
  reject_duplicates(clause);
  // One literal always equals itself.
  if (clause.literals.size() <= 1) return ConstFalse{clause.weight};
  return clause;
}

}  // namespace

NormalizedClause normalize_clause(const Clause& clause, int n) {
  check_range(clause, n);
  switch (clause.kind) {
    case ClauseKind::Cnf: return normalize_cnf(clause);
    case ClauseKind::Xor: return normalize_xor(clause);
    case ClauseKind::CardGe:
    case ClauseKind::CardLe: return normalize_card(clause);
    case ClauseKind::Nae: return normalize_nae(clause);
  }
  throw FormulaError("unknown clause kind");
}

bool clause_satisfied(const Clause& clause, const BooleanAssignment& b) {
  int true_count = 0;
  for (const auto& lit : clause.literals) true_count += b.literal_true(lit);
  const int size = static_cast<int>(clause.literals.size());
  switch (clause.kind) {
    case ClauseKind::Cnf: return true_count > 0;
    case ClauseKind::Xor: return true_count % 2 == 1;
    case ClauseKind::CardGe: return true_count >= clause.threshold;
    case ClauseKind::CardLe: return true_count <= clause.threshold;
    case ClauseKind::Nae: return true_count > 0 && true_count < size;
  }
  return false;
}

bool clause_satisfied(const NormalizedClause& clause,
                      const BooleanAssignment& b) {
  if (std::holds_alternative<ConstTrue>(clause)) return true;
  if (std::holds_alternative<ConstFalse>(clause)) return false;
  return clause_satisfied(std::get<Clause>(clause), b);
}

// ---------------------------------------------------------------------------
// parsing

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

bool parse_int(std::string_view tok, long long& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

bool parse_real(std::string_view tok, double& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

// Accumulates the tokens of one clause. Plain CNF clauses may span several
// lines as in DIMACS; prefixed clauses must fit on one line.
struct PendingClause {
  bool active = false;
  std::size_t line = 0;
  Clause clause;
};

}  // namespace

Formula parse_formula(std::string_view text) {
  Formula f;
  bool have_header = false;
  long long declared_m = 0;
  PendingClause pending;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    auto tokens = split_tokens(line);
    if (tokens.empty()) {
      if (eol == text.size()) break;
      continue;
    }
    if (tokens[0] == "c") {
      auto body = line.substr(line.find('c') + 1);
      if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      f.comments.emplace_back(body);
      continue;
    }
    if (tokens[0].front() == 'c' && !pending.active) {
      // "c..." without a space is still a comment in DIMACS practice.
      f.comments.emplace_back(line.substr(1));
      continue;
    }
    if (tokens[0] == "%") break;  // SATLIB end marker
    if (tokens[0] == "p") {
      if (have_header) throw ParseError(line_no, "duplicate header");
      if (tokens.size() != 4 || (tokens[1] != "hybrid" && tokens[1] != "cnf")) {
        throw ParseError(line_no, "expected 'p hybrid <n> <m>' or 'p cnf <n> <m>'");
      }
      long long n = 0;
      if (!parse_int(tokens[2], n) || n < 0 || n > (1LL << 30)) {
        throw ParseError(line_no, "bad variable count");
      }
      if (!parse_int(tokens[3], declared_m) || declared_m < 0) {
        throw ParseError(line_no, "bad clause count");
      }
      f.n = static_cast<int>(n);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(line_no, "clause before header");

    std::size_t t = 0;
    if (!pending.active) {
      pending = PendingClause{true, line_no, Clause{}};
      Clause& c = pending.clause;
      if (tokens[t] == "w") {
        if (tokens.size() < 2) throw ParseError(line_no, "missing weight");
        double w = 0;
        if (!parse_real(tokens[1], w) || !std::isfinite(w) || w <= 0) {
          throw ParseError(line_no, "weight must be a positive real");
        }
        c.weight = w;
        c.explicit_weight = true;
        t = 2;
      }
      if (t < tokens.size()) {
        if (tokens[t] == "x") {
          c.kind = ClauseKind::Xor;
          ++t;
        } else if (tokens[t] == "n") {
          c.kind = ClauseKind::Nae;
          ++t;
        } else if (tokens[t] == "d") {
          if (t + 2 >= tokens.size()) {
            throw ParseError(line_no, "cardinality clause needs '>=|<=' and k");
          }
          if (tokens[t + 1] == ">=") {
            c.kind = ClauseKind::CardGe;
          } else if (tokens[t + 1] == "<=") {
            c.kind = ClauseKind::CardLe;
          } else {
            throw ParseError(line_no, "expected '>=' or '<=' after 'd'");
          }
          long long k = 0;
          if (!parse_int(tokens[t + 2], k) || k < -(1LL << 30) ||
              k > (1LL << 30)) {
            throw ParseError(line_no, "malformed cardinality threshold '" +
                                          std::string(tokens[t + 2]) + "'");
          }
          c.threshold = static_cast<int>(k);
          t += 3;
        }
      }
    } else if (pending.clause.kind != ClauseKind::Cnf ||
               pending.clause.explicit_weight) {
      throw ParseError(pending.line, "unterminated clause (missing 0)");
    }

    for (; t < tokens.size(); ++t) {
      long long lit = 0;
      if (!parse_int(tokens[t], lit)) {
        throw ParseError(line_no, "unexpected token '" + std::string(tokens[t]) + "'");
      }
      if (lit == 0) {
        f.clauses.push_back(std::move(pending.clause));
        pending = PendingClause{};
        if (t + 1 != tokens.size()) {
          // Another clause on the same line: only plain CNF literals allowed.
          pending = PendingClause{true, line_no, Clause{}};
        }
        continue;
      }
      long long var = lit < 0 ? -lit : lit;
      if (var > f.n) {
        throw ParseError(line_no, "variable " + std::to_string(var) +
                                      " exceeds n = " + std::to_string(f.n));
      }
      pending.clause.literals.push_back(
          Literal{static_cast<int>(var), lit < 0});
    }
    if (pending.active && pending.clause.kind != ClauseKind::Cnf) {
      throw ParseError(pending.line, "unterminated clause (missing 0)");
    }
    if (eol == text.size()) break;
  }

  if (pending.active) {
    throw ParseError(pending.line, "unterminated clause (missing 0)");
  }
  if (!have_header) throw ParseError(line_no, "missing 'p' header");
  if (static_cast<long long>(f.clauses.size()) != declared_m) {
    throw ParseError(line_no, "header declares " + std::to_string(declared_m) +
                                  " clauses, found " +
                                  std::to_string(f.clauses.size()));
  }
  if (f.clauses.empty()) throw ParseError(line_no, "formula has no clauses");
  return f;
}

Formula read_formula_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_formula(ss.str());
}

// ---------------------------------------------------------------------------
// serialization

namespace {

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::string serialize_clause(const Clause& c) {
  std::string out;
  if (c.explicit_weight) out += "w " + format_real(c.weight) + " ";
  switch (c.kind) {
    case ClauseKind::Cnf: break;
    case ClauseKind::Xor: out += "x "; break;
    case ClauseKind::Nae: out += "n "; break;
    case ClauseKind::CardGe:
      out += "d >= " + std::to_string(c.threshold) + " ";
      break;
    case ClauseKind::CardLe:
      out += "d <= " + std::to_string(c.threshold) + " ";
      break;
  }
  for (const auto& lit : c.literals) {
    out += std::to_string(lit.negated ? -lit.var : lit.var);
    out += ' ';
  }
  out += '0';
  return out;
}

std::string serialize_formula(const Formula& f) {
  std::string out;
  for (const auto& comment : f.comments) out += "c " + comment + "\n";
  out += "p hybrid " + std::to_string(f.n) + " " +
         std::to_string(f.clauses.size()) + "\n";
  for (const auto& c : f.clauses) out += serialize_clause(c) + "\n";
  return out;
}

std::string model_line(const BooleanAssignment& b) {
  std::string out = "v";
  for (std::size_t i = 0; i < b.size(); ++i) {
    const long long var = static_cast<long long>(i) + 1;
    out += ' ';
    out += std::to_string(b[i] < 0 ? -var : var);
  }
  out += " 0";
  return out;
}

BooleanAssignment parse_model(std::string_view text, int n) {
  std::vector<std::int8_t> values(static_cast<std::size_t>(n), 0);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool terminated = false;
  while (pos < text.size() && !terminated) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    auto tokens = split_tokens(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (tokens.empty()) continue;
    std::size_t t = 0;
    if (tokens[0] == "v") {
      t = 1;
    } else {
      long long probe = 0;
      if (!parse_int(tokens[0], probe)) continue;  // "s", "c", "o" lines
    }
    for (; t < tokens.size(); ++t) {
      long long lit = 0;
      if (!parse_int(tokens[t], lit)) {
        throw ParseError(line_no, "bad model token '" + std::string(tokens[t]) + "'");
      }
      if (lit == 0) {
        terminated = true;
        break;
      }
      long long var = lit < 0 ? -lit : lit;
      if (var > n) {
        throw ParseError(line_no, "model assigns variable " +
                                      std::to_string(var) + " but n = " +
                                      std::to_string(n));
      }
      auto& slot = values[static_cast<std::size_t>(var - 1)];
      if (slot != 0) {
        throw ParseError(line_no, "variable " + std::to_string(var) +
                                      " assigned twice");
      }
      slot = lit < 0 ? -1 : 1;
    }
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0) {
      throw ParseError(line_no, "model does not assign variable " +
                                    std::to_string(i + 1));
    }
  }
  return BooleanAssignment(std::move(values));
}

}  // namespace mlsat
