#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ocf/algorithms.hpp"
#include "ocf/instance_io.hpp"
#include "ocf/instances.hpp"
#include "ocf/oracles.hpp"

namespace ocf {

enum class ArrivalKind { kCanonical, kWorst, kRandom };
enum class BenchmarkKind { kAuto, kPartition, kMatching, kWitness, kBound };

inline std::string to_string(ArrivalKind a) {
  switch (a) {
    case ArrivalKind::kCanonical: return "canonical";
    case ArrivalKind::kWorst: return "worst";
    case ArrivalKind::kRandom: return "random";
  }
  return "?";
}

inline ArrivalKind parse_arrival(std::string_view s) {
  if (s == "canonical") return ArrivalKind::kCanonical;
  if (s == "worst") return ArrivalKind::kWorst;
  if (s == "random") return ArrivalKind::kRandom;
  throw ParseError("unknown arrival '" + std::string(s) + "' (canonical, worst, random)");
}

inline std::string to_string(BenchmarkKind b) {
  switch (b) {
    case BenchmarkKind::kAuto: return "auto";
    case BenchmarkKind::kPartition: return "partition";
    case BenchmarkKind::kMatching: return "matching";
    case BenchmarkKind::kWitness: return "witness";
    case BenchmarkKind::kBound: return "bound";
  }
  return "?";
}

inline BenchmarkKind parse_benchmark(std::string_view s) {
  for (auto b : {BenchmarkKind::kAuto, BenchmarkKind::kPartition, BenchmarkKind::kMatching,
                 BenchmarkKind::kWitness, BenchmarkKind::kBound}) {
    if (s == to_string(b)) return b;
  }
  throw ParseError("unknown benchmark '" + std::string(s) +
                   "' (auto, partition, matching, witness, bound)");
}

struct ExperimentSpec {
  std::string instance;  // family spec, or a path to an instance JSON file
  std::string algorithm = "gdy";
  Mode mode = Mode::kStandard;
  ArrivalKind arrival = ArrivalKind::kCanonical;
  BenchmarkKind benchmark = BenchmarkKind::kAuto;
  std::size_t trials = 0;  // random arrival: 0 enumerates all orders
  std::uint64_t seed = 1;
  std::optional<std::pair<AgentId, AgentId>> pair_event;  // also report Pr[{i,j} is a coalition]
  std::string trace_out;  // canonical arrival only: JSON-lines trace of the run

  bool operator==(const ExperimentSpec&) const = default;
};

inline nlohmann::json spec_to_json(const ExperimentSpec& s) {
  nlohmann::json j = {{"instance", s.instance},
                      {"algorithm", s.algorithm},
                      {"mode", to_string(s.mode)},
                      {"arrival", to_string(s.arrival)},
                      {"benchmark", to_string(s.benchmark)},
                      {"trials", s.trials},
                      {"seed", s.seed}};
  if (s.pair_event) j["pair"] = {s.pair_event->first, s.pair_event->second};
  if (!s.trace_out.empty()) j["trace"] = s.trace_out;
  return j;
}

inline ExperimentSpec spec_from_json(const nlohmann::json& j) {
  try {
    ExperimentSpec s;
    s.instance = j.at("instance").get<std::string>();
    s.algorithm = j.value("algorithm", s.algorithm);
    s.mode = parse_mode(j.value("mode", std::string("standard")));
    s.arrival = parse_arrival(j.value("arrival", std::string("canonical")));
    s.benchmark = parse_benchmark(j.value("benchmark", std::string("auto")));
    s.trials = j.value("trials", std::size_t{0});
    s.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("pair")) {
      const auto& p = j.at("pair");
      s.pair_event = std::make_pair(p.at(0).get<AgentId>(), p.at(1).get<AgentId>());
    }
    s.trace_out = j.value("trace", std::string());
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("experiment spec: ") + e.what());
  }
}

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

struct ResultRow {
  std::string instance;
  std::size_t n = 0;
  std::string algorithm;
  std::string mode;
  std::string arrival;
  std::string sw;       // "p/q" when exact, decimal mean when sampled
  std::string sw_ci;    // 95% half-width, empty when exact
  std::string pr_pair;  // empty unless a pair event was requested
  std::string opt;
  std::string opt_kind;
  std::string ratio;       // exact "p/q" or decimal
  std::string ratio_ci;
  std::string ratio_value;  // always decimal, for plotting
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;

  static std::vector<std::string> header(bool timing) {
    std::vector<std::string> h{"instance", "n",     "algorithm", "mode",  "arrival",     "sw",
                               "sw_ci",    "pr_pair", "opt",     "opt_kind", "ratio", "ratio_ci",
                               "ratio_value", "trials", "seed"};
    if (timing) h.push_back("wall_ms");
    return h;
  }
  std::vector<std::string> cells(bool timing) const {
    std::vector<std::string> c{instance, std::to_string(n), algorithm, mode,     arrival,
                               sw,       sw_ci,             pr_pair,   opt,      opt_kind,
                               ratio,    ratio_ci,          ratio_value, std::to_string(trials),
                               std::to_string(seed)};
    if (timing) c.push_back(format_double(wall_ms));
    return c;
  }
  // Column lookup by header name; "param:<key>" reads a family parameter from the instance.
  std::string column(const std::string& name) const {
    if (name.starts_with("param:")) {
      const FamilySpec f = FamilySpec::parse(instance);
      return f.str(name.substr(6), "");
    }
    const auto h = header(true);
    const auto c = cells(true);
    for (std::size_t k = 0; k < h.size(); ++k) {
      if (h[k] == name) return c[k];
    }
    throw ParseError("unknown column '" + name + "'");
  }
};

struct LoadedInstance {
  Game game;
  std::optional<ArrivalOrder> order;
  std::optional<AdversaryResult> adversary;
};

inline bool looks_like_path(const std::string& s) {
  return s.ends_with(".json") || std::filesystem::is_regular_file(s);
}

inline LoadedInstance load_experiment_instance(const std::string& text, const AlgorithmFactory& alg) {
  if (looks_like_path(text)) {
    InstanceFile f = load_instance(text);
    std::optional<ArrivalOrder> order;
    if (f.order) order = ArrivalOrder(*f.order);
    return {std::move(f.game), std::move(order), std::nullopt};
  }
  BuiltInstance b = build_family(text, &alg);
  return {std::move(b.instance.game), std::move(b.instance.order), std::move(b.adversary)};
}

inline Weight resolve_benchmark(const LoadedInstance& inst, BenchmarkKind kind, std::string& label) {
  const Game& g = inst.game;
  if (kind == BenchmarkKind::kAuto) {
    if (g.size() <= OracleLimits{}.partition_n) {
      kind = BenchmarkKind::kPartition;
    } else if (inst.adversary) {
      kind = BenchmarkKind::kWitness;
    } else {
      kind = BenchmarkKind::kBound;
    }
  }
  label = to_string(kind);
  switch (kind) {
    case BenchmarkKind::kPartition: return optimal_partition(g).welfare;
    case BenchmarkKind::kMatching: return benchmark_welfare(g, Benchmark::kMatching);  // SW of the best matching
    case BenchmarkKind::kWitness:
      if (!inst.adversary) throw PreconditionError("the witness benchmark needs an adversary instance");
      return social_welfare(g, adversary_witness(inst.adversary->transcript, g));
    case BenchmarkKind::kBound: return positive_edge_sum(g) * Weight(2);  // upper bound on OPT
    case BenchmarkKind::kAuto: break;
  }
  throw PreconditionError("unresolved benchmark");
}

inline ResultRow run_experiment(const ExperimentSpec& spec, std::size_t jobs = 1) {
  const auto t0 = std::chrono::steady_clock::now();
  const AlgorithmFactory make = make_algorithm(spec.algorithm);
  const LoadedInstance inst = load_experiment_instance(spec.instance, make);
  const Game& g = inst.game;

  ResultRow row;
  row.instance = spec.instance;
  row.n = g.size();
  row.algorithm = spec.algorithm;
  row.mode = to_string(spec.mode);
  row.arrival = to_string(spec.arrival);
  row.seed = spec.seed;
  const Weight opt = resolve_benchmark(inst, spec.benchmark, row.opt_kind);
  row.opt = opt.str();

  std::optional<OutcomePredicate> event;
  if (spec.pair_event) {
    auto [a, b] = *spec.pair_event;
    if (a >= g.size() || b >= g.size() || a == b) throw PreconditionError("pair event names invalid agents");
    event = [a, b](const FinalOutcome& o) {
      return o.partition.coalition_of(a) == Coalition{std::min(a, b), std::max(a, b)};
    };
  }

  auto set_exact = [&](const Weight& sw, std::size_t count) {
    row.sw = sw.str();
    const Weight ratio = welfare_ratio(sw, opt);
    row.ratio = ratio.str();
    row.ratio_value = format_double(ratio.to_double());
    row.trials = count;
  };

  switch (spec.arrival) {
    case ArrivalKind::kCanonical: {
      const ArrivalOrder order = inst.order ? *inst.order : ArrivalOrder::identity(g.size());
      const RunTrace tr = run_online(g, order, make, spec.mode);
      set_exact(tr.final_welfare, 1);
      if (event) row.pr_pair = (*event)(FinalOutcome{tr.final_partition, tr.final_welfare}) ? "1" : "0";
      if (!spec.trace_out.empty()) {
        std::ofstream os(spec.trace_out);
        if (!os) throw Error("cannot write trace to '" + spec.trace_out + "'");
        write_trace_jsonl(os, tr);
      }
      break;
    }
    case ArrivalKind::kWorst: {
      require_order_capacity(g.size(), {});
      std::optional<Weight> worst = fold_orders(
          g.size(), jobs, std::optional<Weight>(),
          [&](std::optional<Weight>& acc, const ArrivalOrder& o) {
            Weight x = run_final(g, o, make, spec.mode).welfare;
            if (!acc || x < *acc) acc = std::move(x);
          },
          [](std::optional<Weight>& a, std::optional<Weight>&& b) {
            if (b && (!a || *b < *a)) a = std::move(b);
          });
      set_exact(*worst, static_cast<std::size_t>(factorial(g.size()).to_double()));
      break;
    }
    case ArrivalKind::kRandom: {
      if (spec.trials == 0) {
        const Weight mean = exact_expected_welfare(g, make, spec.mode, {}, jobs);
        set_exact(mean, static_cast<std::size_t>(factorial(g.size()).to_double()));
        if (event) row.pr_pair = exact_event_probability(g, make, spec.mode, *event, {}, jobs).str();
        break;
      }
      const RatioEstimate est = mc_expected_welfare(g, make, spec.mode, spec.trials, spec.seed, jobs);
      row.sw = format_double(est.point);
      row.sw_ci = format_double(est.half_width);
      row.trials = spec.trials;
      if (opt.is_zero()) {
        row.ratio = est.point < 0 ? "0" : "1";
        row.ratio_ci = "0";
      } else {
        row.ratio = format_double(est.point / opt.to_double());
        row.ratio_ci = format_double(est.half_width / std::abs(opt.to_double()));
      }
      row.ratio_value = row.ratio;
      if (event) {
        row.pr_pair = format_double(
            mc_event_frequency(g, make, spec.mode, *event, spec.trials, spec.seed, jobs).point);
      }
      break;
    }
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

// Rows come back in spec order whatever order they finish in.
inline std::vector<ResultRow> run_experiments(const std::vector<ExperimentSpec>& specs, std::size_t jobs) {
  std::vector<ResultRow> rows(specs.size());
  const std::size_t inner = specs.size() == 1 ? jobs : 1;
  parallel_for(specs.size(), jobs, [&](std::size_t k) { rows[k] = run_experiment(specs[k], inner); });
  return rows;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_csv_line(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) os << ',';
    os << csv_field(cells[k]);
  }
  os << "\r\n";
}

inline void write_csv(std::ostream& os, const std::vector<ResultRow>& rows, bool timing = false) {
  write_csv_line(os, ResultRow::header(timing));
  for (const auto& r : rows) write_csv_line(os, r.cells(timing));
}

inline nlohmann::ordered_json rows_to_json(const std::vector<ResultRow>& rows, bool timing = false) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  const auto h = ResultRow::header(timing);
  for (const auto& r : rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    const auto c = r.cells(timing);
    for (std::size_t k = 0; k < h.size(); ++k) obj[h[k]] = c[k];
    out.push_back(std::move(obj));
  }
  return out;
}

struct PlotAxes {
  std::string x = "n";
  std::string y = "ratio_value";
  std::string series = "algorithm";
  std::optional<std::string> asymptote;  // constant column, e.g. a limiting ratio
};

inline double column_number(const std::string& v) {
  if (v.empty()) return std::nan("");
  return Weight::parse(v).to_double();
}

// Long format: one line per row, columns series,x,y[,asymptote].
inline void emit_plotdata(std::ostream& os, const std::vector<ResultRow>& rows, const PlotAxes& axes) {
  std::vector<std::string> head{"series", axes.x, axes.y};
  if (axes.asymptote) head.push_back("asymptote");
  write_csv_line(os, head);
  for (const auto& r : rows) {
    std::vector<std::string> line{r.column(axes.series), r.column(axes.x),
                                  format_double(column_number(r.column(axes.y)))};
    if (axes.asymptote) line.push_back(*axes.asymptote);
    write_csv_line(os, line);
  }
}

}  // namespace ocf
