#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ocf/ocf.hpp"

namespace {

constexpr int kFail = 1;
constexpr int kUsage = 2;

// Writes to the named file, or stdout when the name is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw ocf::Error("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::pair<ocf::AgentId, ocf::AgentId> parse_pair(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw ocf::ParseError("--pair expects i,j");
  return {static_cast<ocf::AgentId>(std::stoul(s.substr(0, comma))),
          static_cast<ocf::AgentId>(std::stoul(s.substr(comma + 1)))};
}

struct RunArgs {
  std::vector<std::string> instances;
  std::vector<std::string> algorithms{"gdy"};
  std::string mode = "standard";
  std::string arrival = "canonical";
  std::string benchmark = "auto";
  std::size_t trials = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  std::size_t jobs = 1;
  bool timing = false;
  std::string pair;
  std::string trace;
  std::string spec_file;
  std::string plot;
  ocf::PlotAxes axes;
  std::string asymptote;
};

int cmd_run(const RunArgs& a) {
  std::vector<ocf::ExperimentSpec> specs;
  if (!a.spec_file.empty()) {
    std::ifstream is(a.spec_file);
    if (!is) throw ocf::ParseError("cannot read '" + a.spec_file + "'");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
      throw ocf::ParseError(a.spec_file + ": " + e.what());
    }
    if (!doc.is_array()) doc = nlohmann::json::array({doc});
    for (const auto& j : doc) specs.push_back(ocf::spec_from_json(j));
  }
  for (const auto& inst : a.instances) {
    for (const auto& alg : a.algorithms) {
      ocf::ExperimentSpec s;
      s.instance = inst;
      s.algorithm = alg;
      s.mode = ocf::parse_mode(a.mode);
      s.arrival = ocf::parse_arrival(a.arrival);
      s.benchmark = ocf::parse_benchmark(a.benchmark);
      s.trials = a.trials;
      s.seed = a.seed;
      if (!a.pair.empty()) s.pair_event = parse_pair(a.pair);
      s.trace_out = a.trace;
      specs.push_back(std::move(s));
    }
  }
  if (specs.empty()) throw ocf::ParseError("run needs --instance or --spec");
  if (!a.trace.empty() && specs.size() > 1) throw ocf::ParseError("--trace needs exactly one experiment");

  const auto rows = ocf::run_experiments(specs, a.jobs);
  Output out(a.out);
  if (a.format == "csv") {
    ocf::write_csv(out.stream(), rows, a.timing);
  } else {
    out.stream() << ocf::rows_to_json(rows, a.timing).dump(2) << '\n';
  }
  if (!a.plot.empty()) {
    ocf::PlotAxes axes = a.axes;
    if (!a.asymptote.empty()) axes.asymptote = a.asymptote;
    Output plot(a.plot);
    ocf::emit_plotdata(plot.stream(), rows, axes);
  }
  return 0;
}

void print_report(std::ostream& os, const ocf::SuiteReport& r, int criterion) {
  os << (r.passed() ? "PASS" : "FAIL") << ' ' << r.name;
  if (criterion) os << " (criterion " << criterion << ')';
  os << ": " << r.claim << '\n';
  for (const auto& c : r.checks) {
    os << "  " << (c.passed ? "ok   " : "FAIL ") << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << '\n';
  }
}

nlohmann::ordered_json report_json(const ocf::SuiteReport& r) {
  nlohmann::ordered_json j = {{"suite", r.name}, {"claim", r.claim}, {"passed", r.passed()}};
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return j;
}

int cmd_suite(std::vector<std::string> names, bool list, const ocf::SuiteOptions& opts,
              const std::string& format, const std::string& out_path) {
  if (list) {
    for (const auto& e : ocf::suite_registry()) std::cout << e.name << '\n';
    return 0;
  }
  if (names.empty()) {
    for (const auto& e : ocf::suite_registry()) names.push_back(e.name);
  }
  Output out(out_path);
  nlohmann::ordered_json all = nlohmann::ordered_json::array();
  bool ok = true;
  for (const auto& name : names) {
    int criterion = 0;
    for (const auto& e : ocf::suite_registry()) {
      if (e.name == name) criterion = e.criterion;
    }
    const ocf::SuiteReport r = ocf::theorem_suite(name, opts);
    ok = ok && r.passed();
    if (format == "json") {
      all.push_back(report_json(r));
    } else {
      print_report(out.stream(), r, criterion);
      out.stream().flush();
    }
  }
  if (format == "json") out.stream() << all.dump(2) << '\n';
  return ok ? 0 : kFail;
}

int cmd_identities(const std::string& format) {
  const ocf::SuiteReport r = ocf::identity_suite();
  if (format == "json") {
    std::cout << report_json(r).dump(2) << '\n';
  } else {
    print_report(std::cout, r, 0);
  }
  return r.passed() ? 0 : kFail;
}

int cmd_gen(const std::string& instance, const std::string& alg, const std::string& out_path) {
  const ocf::LoadedInstance inst = ocf::load_experiment_instance(instance, ocf::make_algorithm(alg));
  std::optional<std::vector<ocf::AgentId>> order;
  if (inst.order) order = inst.order->sequence();
  Output out(out_path);
  out.stream() << ocf::instance_to_json(inst.game, order).dump(2) << '\n';
  return 0;
}

int cmd_replay(const std::string& instance, const std::string& alg, const std::string& trace_path,
               const std::string& mode_name) {
  const ocf::Mode mode = ocf::parse_mode(mode_name);
  const ocf::LoadedInstance inst = ocf::load_experiment_instance(instance, ocf::make_algorithm(alg));
  std::ifstream is(trace_path);
  if (!is) throw ocf::ParseError("cannot read trace '" + trace_path + "'");
  const ocf::RunTrace recorded = ocf::read_trace_jsonl(is, mode);
  const ocf::RunTrace replayed = ocf::replay_trace(inst.game, recorded, mode);
  const ocf::TraceValidation v =
      ocf::validate_trace(inst.game, ocf::order_of_trace(recorded, inst.game.size()), replayed, mode);
  if (!v.ok) {
    std::cout << "INVALID trace (" << v.violations.size() << " violations)\n";
    for (const auto& line : v.violations) std::cout << "  " << line << '\n';
    return kFail;
  }
  std::cout << "valid trace: " << replayed.steps.size() << " steps, final partition "
            << replayed.final_partition.str() << ", SW " << replayed.final_welfare.str() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online coalition formation: experiments, acceptance suites and instance tools"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "run experiments and emit CSV or JSON rows");
  run_cmd->add_option("--instance,-i", run.instances, "family spec (e.g. trap:k=4) or instance JSON path");
  run_cmd->add_option("--alg,-a", run.algorithms, "algorithm name; repeatable")->capture_default_str();
  run_cmd->add_option("--mode", run.mode)->check(CLI::IsMember({"standard", "dissolution"}))->capture_default_str();
  run_cmd->add_option("--arrival", run.arrival)
      ->check(CLI::IsMember({"canonical", "worst", "random"}))
      ->capture_default_str();
  run_cmd->add_option("--benchmark", run.benchmark)
      ->check(CLI::IsMember({"auto", "partition", "matching", "witness", "bound"}))
      ->capture_default_str();
  run_cmd->add_option("--trials", run.trials, "Monte Carlo trials; 0 enumerates all orders")->capture_default_str();
  run_cmd->add_option("--seed", run.seed)->capture_default_str();
  run_cmd->add_option("--out,-o", run.out, "output file (default stdout)");
  run_cmd->add_option("--format", run.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  run_cmd->add_option("--jobs,-j", run.jobs)->check(CLI::PositiveNumber)->capture_default_str();
  run_cmd->add_flag("--timing", run.timing, "append a wall_ms column (output no longer byte-stable)");
  run_cmd->add_option("--pair", run.pair, "report Pr[{i,j} is a coalition], as i,j");
  run_cmd->add_option("--trace", run.trace, "write the canonical run as JSON lines");
  run_cmd->add_option("--spec", run.spec_file, "JSON file with one experiment spec or an array of them");
  run_cmd->add_option("--plot", run.plot, "also write long-format plot data here");
  run_cmd->add_option("--plot-x", run.axes.x)->capture_default_str();
  run_cmd->add_option("--plot-y", run.axes.y)->capture_default_str();
  run_cmd->add_option("--plot-series", run.axes.series)->capture_default_str();
  run_cmd->add_option("--plot-asymptote", run.asymptote, "constant written in an asymptote column");

  std::vector<std::string> suite_names;
  bool suite_list = false;
  ocf::SuiteOptions suite_opts;
  std::string suite_format = "text", suite_out;
  auto* suite_cmd = app.add_subcommand("suite", "run acceptance suites (all when none named)");
  suite_cmd->add_option("names", suite_names);
  suite_cmd->add_flag("--list", suite_list);
  suite_cmd->add_option("--jobs,-j", suite_opts.jobs)->check(CLI::PositiveNumber)->capture_default_str();
  suite_cmd->add_option("--seed", suite_opts.seed)->capture_default_str();
  suite_cmd->add_option("--format", suite_format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  suite_cmd->add_option("--out,-o", suite_out);

  std::string id_format = "text";
  auto* id_cmd = app.add_subcommand("identities", "verify the closed-form identities");
  id_cmd->add_option("--format", id_format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  std::string gen_instance, gen_alg = "gdy", gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "materialize a family spec as instance JSON");
  gen_cmd->add_option("--instance,-i", gen_instance)->required();
  gen_cmd->add_option("--alg,-a", gen_alg, "algorithm the adversary family plays against")->capture_default_str();
  gen_cmd->add_option("--out,-o", gen_out);

  std::string rep_instance, rep_alg = "gdy", rep_trace, rep_mode = "standard";
  auto* rep_cmd = app.add_subcommand("replay", "validate a JSON-lines trace against an instance");
  rep_cmd->add_option("--instance,-i", rep_instance)->required();
  rep_cmd->add_option("--trace,-t", rep_trace)->required();
  rep_cmd->add_option("--mode", rep_mode)->check(CLI::IsMember({"standard", "dissolution"}))->capture_default_str();
  rep_cmd->add_option("--alg,-a", rep_alg, "algorithm for adversary families")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*suite_cmd) return cmd_suite(suite_names, suite_list, suite_opts, suite_format, suite_out);
    if (*id_cmd) return cmd_identities(id_format);
    if (*gen_cmd) return cmd_gen(gen_instance, gen_alg, gen_out);
    if (*rep_cmd) return cmd_replay(rep_instance, rep_alg, rep_trace, rep_mode);
  } catch (const ocf::ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    for (const auto& line : e.report()) std::cerr << "  " << line << '\n';
    return kFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
