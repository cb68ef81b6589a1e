#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mlsat/benchgen.hpp"
#include "mlsat/formula.hpp"
#include "mlsat/solver.hpp"

namespace mlsat::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path, std::istream& in) {
  if (path == "-") {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << file.rdbuf();
  return ss.str();
}

void parse_mode(const std::string& text, SolverConfig& cfg) {
  if (text == "sat") {
    cfg.mode = SolveMode::Sat;
  } else if (text == "maxsat") {
    cfg.mode = SolveMode::MaxSat;
  } else if (text.starts_with("threshold:")) {
    const auto digits = std::string_view(text).substr(10);
    std::size_t t = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), t);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
      throw UsageError("bad threshold in --mode " + text);
    }
    cfg.mode = SolveMode::Threshold;
    cfg.target_satisfied = t;
  } else {
    throw UsageError("--mode must be sat, maxsat or threshold:<t>");
  }
}

struct SolveArgs {
  std::string path;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t restarts = SolverConfig{}.restarts;
  double time_limit = SolverConfig{}.time_budget;
  double eta = 0.0;
  double eps = DescentConfig{}.eps;
  std::size_t max_iters = DescentConfig{}.max_iters;
  std::string mode = "sat";
  std::string weights = "length";
};

int cmd_solve(const SolveArgs& a, std::istream& in, std::ostream& out,
              std::ostream& err) {
  const Formula f = parse_formula(read_input(a.path, in));
  SolverConfig cfg;
  cfg.seed = a.seed;
  cfg.parallelism = a.threads;
  cfg.restarts = a.restarts;
  cfg.time_budget = a.time_limit;
  cfg.descent.eta = a.eta;
  cfg.descent.eps = a.eps;
  cfg.descent.max_iters = a.max_iters;
  parse_mode(a.mode, cfg);
  if (a.weights == "uniform") cfg.weight_rule = WeightRule::Uniform;
  else if (a.weights == "length") cfg.weight_rule = WeightRule::ClauseLength;
  else cfg.weight_rule = WeightRule::Explicit;
  if (cfg.mode == SolveMode::Threshold && cfg.target_satisfied > f.m()) {
    throw UsageError("threshold exceeds clause count");
  }

  const SolveResult r = solve(f, cfg);

  out << "c mlsat solve: value -1 = True, +1 = False; in the v line -i means "
         "variable i is True, i means False\n";
  out << "c variables " << f.n << " clauses " << f.m() << " weights "
      << to_string(effective_weight_rule(f, cfg.weight_rule)) << "\n";
  out << "c restarts " << r.restarts_used << " iterations " << r.iterations_total
      << " local_minima " << r.local_minima << "\n";
  if (r.const_false_clauses > 0) {
    out << "c constant-false clauses " << r.const_false_clauses << "\n";
  }
  switch (r.status) {
    case SolveStatus::Sat: out << "s SATISFIABLE\n"; break;
    case SolveStatus::ThresholdMet: out << "s THRESHOLD_MET\n"; break;
    case SolveStatus::UnknownBestFound: out << "s UNKNOWN\n"; break;
  }
  out << "o " << r.satisfied << "/" << f.m() << "\n";
  out << model_line(r.witness) << "\n";
  // Timing goes to stderr so stdout stays reproducible under a fixed seed.
  err << "c wall_time " << r.wall_time << "\n";
  return r.status == SolveStatus::Sat ? kExitSat : kExitOk;
}

struct GenArgs {
  std::string family;
  int n = 20;
  std::uint64_t seed = 0;
  double e = 0.25;
  std::string noise = "exact";
  double r = 1.0, s = 0.2, l = 0.1, k = 0.5;
  std::string output;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  Generated g;
  if (a.family == "vc") {
    g = gen_vertex_cover(a.n, a.seed);
  } else if (a.family == "parity") {
    g = gen_parity_learning(a.n, a.e, a.seed,
                            a.noise == "bernoulli" ? ParityNoise::Bernoulli
                                                   : ParityNoise::ExactCount);
  } else {
    g = gen_random_hybrid(a.n, a.r, a.s, a.l, a.k, a.seed);
  }
  const std::string text = serialize_formula(g.formula);
  if (a.output.empty() || a.output == "-") {
    out << text;
  } else {
    std::ofstream file(a.output, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + a.output);
    file << text;
  }
  return kExitOk;
}

int cmd_check(const std::string& formula_path, const std::string& model_path,
              std::istream& in, std::ostream& out) {
  const Formula f = parse_formula(read_input(formula_path, in));
  BooleanAssignment b;
  if (!model_path.empty()) {
    b = parse_model(read_input(model_path, in), f.n);
  } else {
    const auto meta = find_metadata(f);
    std::optional<BooleanAssignment> cert;
    if (meta) cert = certificate_from_metadata(*meta, f.n);
    if (!cert) throw UsageError("no model given and the formula has no certificate");
    b = *cert;
  }

  std::map<std::string_view, std::pair<std::size_t, std::size_t>> by_kind;
  std::size_t satisfied = 0;
  for (const auto& c : f.clauses) {
    auto& [sat, total] = by_kind[to_string(c.kind)];
    ++total;
    if (clause_satisfied(c, b)) {
      ++sat;
      ++satisfied;
    }
  }
  for (const auto& [kind, counts] : by_kind) {
    out << "c " << kind << " " << counts.first << "/" << counts.second << "\n";
  }
  out << "o " << satisfied << "/" << f.m() << "\n";
  const bool all = satisfied == f.m();
  out << (all ? "s VERIFIED\n" : "s VIOLATED\n");
  return all ? kExitOk : kExitViolated;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Continuous-relaxation solver for hybrid Boolean formulas", "mlsat"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Search for a satisfying or best assignment");
  solve_cmd->add_option("formula", solve_args.path, "Formula file, or - for stdin")
      ->required();
  solve_cmd->add_option("--seed", solve_args.seed, "Master RNG seed");
  solve_cmd->add_option("--threads", solve_args.threads, "Worker threads")
      ->check(CLI::Range(1U, 1024U));
  solve_cmd->add_option("--restarts", solve_args.restarts,
                        "Restart cap (0 = only the time limit)");
  solve_cmd->add_option("--time-limit", solve_args.time_limit,
                        "Wall-clock budget in seconds (<= 0 = none)");
  solve_cmd->add_option("--eta", solve_args.eta, "Step size (0 = 1/(n W))");
  solve_cmd->add_option("--eps", solve_args.eps, "Stationarity tolerance")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--max-iters", solve_args.max_iters, "Iterations per restart");
  solve_cmd->add_option("--mode", solve_args.mode, "sat, maxsat or threshold:<t>");
  solve_cmd->add_option("--weights", solve_args.weights,
                        "Weight rule for unweighted files")
      ->check(CLI::IsMember({"uniform", "length", "explicit"}));

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a benchmark formula");
  gen_cmd->add_option("family", gen_args.family, "vc, parity or hybrid")
      ->required()
      ->check(CLI::IsMember({"vc", "parity", "hybrid"}));
  gen_cmd->add_option("--n", gen_args.n, "Vertices (vc), N (parity) or variables (hybrid)");
  gen_cmd->add_option("--seed", gen_args.seed, "RNG seed");
  gen_cmd->add_option("--e", gen_args.e, "parity: noise rate");
  gen_cmd->add_option("--noise", gen_args.noise, "parity: exact or bernoulli")
      ->check(CLI::IsMember({"exact", "bernoulli"}));
  gen_cmd->add_option("--r", gen_args.r, "hybrid: 3-CNF clauses per variable");
  gen_cmd->add_option("--s", gen_args.s, "hybrid: XOR clauses per variable");
  gen_cmd->add_option("--l", gen_args.l, "hybrid: XOR length as a fraction of n");
  gen_cmd->add_option("--k", gen_args.k, "hybrid: cardinality bound as a fraction of n");
  gen_cmd->add_option("-o,--output", gen_args.output, "Output file (default stdout)");

  std::string check_formula, check_model;
  auto* check_cmd = app.add_subcommand("check", "Verify a model against a formula");
  check_cmd->add_option("formula", check_formula, "Formula file")->required();
  check_cmd->add_option("model", check_model,
                        "Model file (default: the formula's certificate)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve_args, in, out, err);
    if (*gen_cmd) return cmd_gen(gen_args, out);
    return cmd_check(check_formula, check_model, in, out);
  } catch (const mlsat::ParseError& e) {
    err << "mlsat: parse error, " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "mlsat: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace mlsat::cli
