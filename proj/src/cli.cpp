#include "kserver/cli.hpp"

#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kserver/algorithms.hpp"
#include "kserver/error.hpp"
#include "kserver/game.hpp"
#include "kserver/lp.hpp"
#include "kserver/metric_io.hpp"
#include "kserver/offline.hpp"
#include "kserver/policy_io.hpp"
#include "kserver/report.hpp"

namespace kserver {

namespace {

struct RunConfig {
  std::string metric_path;
  int k = 1;
  std::string c0;  // comma-separated names; empty means the first k points
  int horizon = 1;
  std::string tolerance = "1/1024";
  std::string epsilon;
  std::string c;
  std::string alpha = "0";
  std::size_t var_cap = kDefaultVariableCap;
  std::string format = "text";
  unsigned threads = 1;
  bool timing = false;

  // command-specific
  std::string algorithm = "greedy";
  std::string sequence;
  std::string policy_out = "policy.json";
  std::string dump_lp;
};

/// Failure carrying the exit code it maps to.
struct CliFailure {
  int code;
  std::string message;
};

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Metric load_metric_or_fail(const std::string& path) {
  try {
    return load_metric(path);
  } catch (const Error& e) {
    throw CliFailure{kExitBadMetric, "invalid metric file '" + path + "': " + e.what()};
  }
}

PointIndex point_or_fail(const Metric& metric, const std::string& name) {
  const auto idx = metric.index_of(name);
  if (!idx) throw CliFailure{kExitUnknownPoint, "unknown point '" + name + "'"};
  return *idx;
}

Rational rational_or_fail(const std::string& text, const char* flag) {
  try {
    return parse_rational(text);
  } catch (const Error& e) {
    throw CliFailure{kExitUsage, std::string("--") + flag + ": " + e.what()};
  }
}

struct Setup {
  Metric metric;
  std::shared_ptr<const ConfigurationSpace> space;
  Configuration c0;
};

/// Loads the metric, checks k and resolves the initial configuration.
Setup prepare(const RunConfig& cfg, bool require_k_below_n) {
  Metric metric = load_metric_or_fail(cfg.metric_path);
  const auto n = static_cast<int>(metric.size());
  if (cfg.k < 1) throw CliFailure{kExitUsage, "--k must be at least 1"};
  if (cfg.k > n || (require_k_below_n && cfg.k == n)) {
    throw CliFailure{kExitDegenerateK, "k=" + std::to_string(cfg.k) + " with n=" + std::to_string(n) +
                                           (cfg.k == n ? ": every request is free, ratio undefined (reported as 1)"
                                                       : ": k exceeds the number of points")};
  }
  Configuration c0 = first_k_points(cfg.k);
  if (!cfg.c0.empty()) {
    std::vector<PointIndex> pts;
    for (const auto& name : split_names(cfg.c0)) pts.push_back(point_or_fail(metric, name));
    try {
      c0 = Configuration(std::move(pts));
    } catch (const Error& e) {
      throw CliFailure{kExitUsage, std::string("--c0: ") + e.what()};
    }
    if (static_cast<int>(c0.size()) != cfg.k) throw CliFailure{kExitUsage, "--c0 must name exactly k points"};
  }
  auto space = std::make_shared<const ConfigurationSpace>(metric, cfg.k);
  return {std::move(metric), std::move(space), std::move(c0)};
}

std::string names_of(const Metric& metric, const RequestSequence& requests) {
  std::string out;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    if (i) out += ',';
    out += metric.name(requests[i]);
  }
  return out;
}

nlohmann::json names_json(const Metric& metric, const RequestSequence& requests) {
  nlohmann::json out = nlohmann::json::array();
  for (PointIndex p : requests) out.push_back(metric.name(p));
  return out;
}

void check_text_or_json(const RunConfig& cfg) {
  if (cfg.format != "text" && cfg.format != "json") {
    throw CliFailure{kExitUsage, "--format must be text or json for this command"};
  }
}

using Clock = std::chrono::steady_clock;

long long elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

int cmd_opt_det(const RunConfig& cfg, std::ostream& out) {
  check_text_or_json(cfg);
  const Setup s = prepare(cfg, true);
  const auto start = Clock::now();
  const RatioResult r = opt_det_ratio(s.space, s.c0, cfg.horizon);
  const long long ms = elapsed_ms(start);
  if (cfg.format == "json") {
    nlohmann::json strategy = nlohmann::json::object();
    for (const auto& [prefix, answer] : r.witness_strategy) {
      strategy[names_of(s.metric, prefix)] = to_string(answer, s.metric);
    }
    nlohmann::json doc{{"value", to_string(r.value)},
                       {"horizon", cfg.horizon},
                       {"witness_adversary", names_json(s.metric, r.witness_adversary)},
                       {"witness_strategy", strategy}};
    if (cfg.timing) doc["runtime_ms"] = ms;
    out << doc.dump(1) << "\n";
  } else {
    out << "value: " << to_string(r.value) << "\n";
    out << "witness_adversary: " << names_of(s.metric, r.witness_adversary) << "\n";
    out << "witness_strategy:\n";
    for (const auto& [prefix, answer] : r.witness_strategy) {
      out << "  " << names_of(s.metric, prefix) << " -> " << to_string(answer, s.metric) << "\n";
    }
    if (cfg.timing) out << "runtime_ms: " << ms << "\n";
  }
  return kExitOk;
}

int cmd_opt_rand(const RunConfig& cfg, std::ostream& out) {
  check_text_or_json(cfg);
  const Rational tolerance = rational_or_fail(cfg.tolerance, "tolerance");
  if (tolerance <= 0) throw CliFailure{kExitUsage, "--tolerance must be positive"};
  const Setup s = prepare(cfg, true);
  const auto start = Clock::now();
  const RandRatioResult r = opt_rand_ratio(s.space, s.c0, cfg.horizon, tolerance, cfg.var_cap);
  const long long ms = elapsed_ms(start);

  {
    std::ofstream file(cfg.policy_out);
    if (!file) throw CliFailure{kExitUsage, "cannot write policy file '" + cfg.policy_out + "'"};
    file << policy_to_json(r.policy, r.tau_low, r.tau_high);
  }
  if (!cfg.dump_lp.empty()) {
    std::ofstream file(cfg.dump_lp);
    if (!file) throw CliFailure{kExitUsage, "cannot write LP dump '" + cfg.dump_lp + "'"};
    file << dump_lp(build_lp(s.space, s.c0, cfg.horizon, r.tau_high, cfg.var_cap));
  }

  if (cfg.format == "json") {
    nlohmann::json doc{{"tau_low", to_string(r.tau_low)},
                       {"tau_high", to_string(r.tau_high)},
                       {"iterations", r.iterations},
                       {"variables", r.variables},
                       {"policy_file", cfg.policy_out}};
    if (cfg.timing) doc["runtime_ms"] = ms;
    out << doc.dump(1) << "\n";
  } else {
    out << "tau_low: " << to_string(r.tau_low) << "\n";
    out << "tau_high: " << to_string(r.tau_high) << "\n";
    out << "iterations: " << r.iterations << "\n";
    out << "variables: " << r.variables << "\n";
    out << "policy_file: " << cfg.policy_out << "\n";
    if (cfg.timing) out << "runtime_ms: " << ms << "\n";
  }
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  check_text_or_json(cfg);
  const bool is_policy = cfg.algorithm.rfind("policy:", 0) == 0;
  const Setup s = prepare(cfg, false);
  RequestSequence requests;
  for (const auto& name : split_names(cfg.sequence)) requests.push_back(point_or_fail(s.metric, name));

  std::vector<Rational> step_costs;
  std::vector<std::string> answers;
  Configuration start = s.c0;
  if (is_policy) {
    const std::string path = cfg.algorithm.substr(7);
    std::ifstream file(path);
    if (!file) throw CliFailure{kExitUsage, "cannot read policy file '" + path + "'"};
    std::stringstream buf;
    buf << file.rdbuf();
    LoadedPolicy loaded = [&] {
      try {
        return policy_from_json(buf.str(), s.metric);
      } catch (const Error& e) {
        throw CliFailure{kExitUsage, std::string("policy file: ") + e.what()};
      }
    }();
    if (static_cast<int>(requests.size()) > loaded.policy.horizon()) {
      throw CliFailure{kExitUsage, "sequence is longer than the policy horizon"};
    }
    start = loaded.policy.initial();
    step_costs = expected_step_costs(loaded.policy, requests);
  } else {
    std::unique_ptr<OnlineAlgorithm> alg;
    if (cfg.algorithm == "greedy") {
      alg = std::make_unique<GreedyAlgorithm>(s.space, s.c0);
    } else if (cfg.algorithm == "wfa") {
      alg = std::make_unique<WorkFunctionAlgorithm>(s.space, s.c0);
    } else {
      throw CliFailure{kExitUsage, "--algorithm must be greedy, wfa or policy:<file>"};
    }
    const SimulationResult r = simulate(*alg, s.c0, requests);
    step_costs = r.step_costs;
    for (const auto& c : r.answers) answers.push_back(to_string(c, s.metric));
  }

  Rational total = 0;
  for (const auto& c : step_costs) total += c;
  const Rational opt = opt_cost(s.space, start, requests);
  const ExtendedRatio ratio = ExtendedRatio::of(total, opt);

  if (cfg.format == "json") {
    nlohmann::json steps = nlohmann::json::array();
    for (std::size_t i = 0; i < requests.size(); ++i) {
      nlohmann::json step{{"request", s.metric.name(requests[i])}, {"cost", to_string(step_costs[i])}};
      if (!is_policy) step["answer"] = answers[i];
      steps.push_back(std::move(step));
    }
    out << nlohmann::json{{"expected", is_policy},
                          {"steps", steps},
                          {"total", to_string(total)},
                          {"opt", to_string(opt)},
                          {"ratio", to_string(ratio)}}
                .dump(1)
        << "\n";
  } else {
    const char* prefix = is_policy ? "expected " : "";
    for (std::size_t i = 0; i < requests.size(); ++i) {
      out << "step " << (i + 1) << ": request " << s.metric.name(requests[i]);
      if (!is_policy) out << " -> " << answers[i];
      out << " " << prefix << "cost " << to_string(step_costs[i]) << "\n";
    }
    out << prefix << "total: " << to_string(total) << "\n";
    out << "opt: " << to_string(opt) << "\n";
    out << prefix << "ratio: " << to_string(ratio) << "\n";
  }
  return kExitOk;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out) {
  check_text_or_json(cfg);
  if (cfg.epsilon.empty()) throw CliFailure{kExitUsage, "--epsilon is required"};
  const Rational epsilon = rational_or_fail(cfg.epsilon, "epsilon");
  if (epsilon <= 0) throw CliFailure{kExitBadEpsilon, "--epsilon must be positive"};
  const Setup s = prepare(cfg, false);
  const Rational c = cfg.c.empty() ? Rational(2 * cfg.k - 1) : rational_or_fail(cfg.c, "c");
  const Rational alpha = rational_or_fail(cfg.alpha, "alpha");
  BoundParameters b;
  try {
    b = compute_bounds(normalize(s.metric), cfg.k, c, alpha, epsilon);
  } catch (const Error& e) {
    throw CliFailure{kExitUsage, e.what()};
  }
  std::vector<Rational> xi;
  for (int i = 2; i <= std::max(2, cfg.k); ++i) xi.push_back(b.xi_at(i));

  if (cfg.format == "json") {
    nlohmann::json doc{{"gamma", to_string(s.metric.gamma())}, {"B", to_string(b.B)},
                       {"opt_threshold", to_string(b.opt_threshold)}, {"phi", to_string(b.phi)},
                       {"D", b.D.get_str()}};
    nlohmann::json xs = nlohmann::json::object();
    for (std::size_t i = 0; i < xi.size(); ++i) xs[std::to_string(i + 2)] = to_string(xi[i]);
    doc["xi"] = xs;
    out << doc.dump(1) << "\n";
  } else {
    out << "gamma: " << to_string(s.metric.gamma()) << "\n";
    out << "B: " << to_string(b.B) << "\n";
    out << "opt_threshold: " << to_string(b.opt_threshold) << "\n";
    out << "phi: " << to_string(b.phi) << "\n";
    out << "D: " << b.D.get_str() << "\n";
    for (std::size_t i = 0; i < xi.size(); ++i) out << "xi_" << (i + 2) << ": " << to_string(xi[i]) << "\n";
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const std::string format = cfg.format == "text" ? "csv" : cfg.format;
  if (format != "csv" && format != "json") throw CliFailure{kExitUsage, "--format must be csv or json for sweep"};
  const Rational tolerance = rational_or_fail(cfg.tolerance, "tolerance");
  if (tolerance <= 0) throw CliFailure{kExitUsage, "--tolerance must be positive"};
  const Setup s = prepare(cfg, true);
  SweepOptions options;
  options.tolerance = tolerance;
  options.variable_cap = cfg.var_cap;
  options.threads = cfg.threads;
  RatioTable table = sweep_horizons(s.space, s.c0, cfg.horizon, options);
  if (!cfg.timing) {
    for (auto& row : table.rows) row.runtime_ms = 0;
  }
  out << emit(table, format);
  return kExitOk;
}

void add_common(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--metric", cfg.metric_path, "metric JSON file")->required();
  cmd.add_option("--k", cfg.k, "number of servers")->required();
  cmd.add_option("--c0", cfg.c0, "initial configuration as point names a,b (default: first k points)");
  cmd.add_option("--format", cfg.format, "output format: text|json (sweep: csv|json)");
  cmd.add_option("--threads", cfg.threads, "worker cap")->check(CLI::PositiveNumber);
  cmd.add_flag("--timing", cfg.timing, "include wall-clock times in reports");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact finite-horizon competitive ratios for the k-server problem"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* opt_det = app.add_subcommand("opt-det", "optimal strict deterministic ratio by exact minimax search");
  add_common(*opt_det, cfg);
  opt_det->add_option("--horizon", cfg.horizon, "request horizon T")->required()->check(CLI::NonNegativeNumber);

  auto* opt_rand = app.add_subcommand("opt-rand", "optimal strict randomized ratio by LP binary search");
  add_common(*opt_rand, cfg);
  opt_rand->add_option("--horizon", cfg.horizon, "request horizon T")->required()->check(CLI::PositiveNumber);
  opt_rand->add_option("--tolerance", cfg.tolerance, "bracket width P/Q (default 1/1024)");
  opt_rand->add_option("--var-cap", cfg.var_cap, "maximum LP variable count");
  opt_rand->add_option("--policy-out", cfg.policy_out, "where to write the extracted policy");
  opt_rand->add_option("--dump-lp", cfg.dump_lp, "also write the LP at tau_high in text form");

  auto* sim = app.add_subcommand("simulate", "run an online algorithm on a request sequence");
  add_common(*sim, cfg);
  sim->add_option("--algorithm", cfg.algorithm, "greedy | wfa | policy:<file>");
  sim->add_option("--sequence", cfg.sequence, "requests as point names a,b,c");

  auto* bounds = app.add_subcommand("bounds", "finite-horizon reduction constants B, phi, D, xi");
  add_common(*bounds, cfg);
  bounds->add_option("--epsilon", cfg.epsilon, "target slack P/Q")->required();
  bounds->add_option("--c", cfg.c, "assumed competitive ratio P/Q (default 2k-1)");
  bounds->add_option("--alpha", cfg.alpha, "additive constant P/Q (default 0)");

  auto* sweep = app.add_subcommand("sweep", "deterministic and randomized ratios for T = 1..horizon");
  add_common(*sweep, cfg);
  sweep->add_option("--horizon", cfg.horizon, "largest horizon")->required()->check(CLI::PositiveNumber);
  sweep->add_option("--tolerance", cfg.tolerance, "bracket width P/Q (default 1/1024)");
  sweep->add_option("--var-cap", cfg.var_cap, "maximum LP variable count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*opt_det) return cmd_opt_det(cfg, out);
    if (*opt_rand) return cmd_opt_rand(cfg, out);
    if (*sim) return cmd_simulate(cfg, out);
    if (*bounds) return cmd_bounds(cfg, out);
    if (*sweep) return cmd_sweep(cfg, out);
  } catch (const CliFailure& f) {
    err << "error: " << f.message << "\n";
    return f.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::InstanceTooLarge: return kExitTooLarge;
      case ErrorCode::DegenerateKEqualsN: return kExitDegenerateK;
      case ErrorCode::NonPositiveEpsilon: return kExitBadEpsilon;
      default: return kExitUsage;
    }
  }
  return kExitUsage;
}

}  // namespace kserver
