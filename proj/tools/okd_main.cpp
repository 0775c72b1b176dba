// okd: generate, validate, run, solve, benchmark and tune instances of the
// online multiple-knapsack problem with departures.
//
// Machine-readable output goes to stdout or --out; human summaries go to
// stderr. Exit codes: 0 success, 1 validation or I/O failure, 2 usage error.

#include <omp.h>

#include <charconv>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "okd/bench.hpp"
#include "okd/engine.hpp"
#include "okd/format.hpp"
#include "okd/instances.hpp"
#include "okd/io.hpp"
#include "okd/oracle.hpp"
#include "okd/threshold.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

okd::ThresholdConfig parse_gamma(const std::string& text) {
  okd::ThresholdConfig config;
  if (text.empty() || text == "auto") return config;
  double g = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), g);
  if (ec != std::errc() || ptr != text.data() + text.size() || !(g > 0.0)) {
    throw UsageError("--gamma must be a positive number or \"auto\", got '" + text + "'");
  }
  config.gamma = g;
  return config;
}

std::string dump(const okd::Json& j) { return j.dump(2) + "\n"; }

bool given(const CLI::App& app, const std::string& name) {
  const CLI::Option* opt = app.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

void set_jobs(int jobs) {
  if (jobs > 0) omp_set_num_threads(jobs);
}

struct Options {
  std::string input = "-";
  std::string out;
  std::string config;
  std::string gamma = "auto";
  okd::GenParams gen;
  std::string family = "uniform";
  double eps = 0.0;
  bool all_prefixes = false;
  bool lenient = false;
  bool bruteforce = false;
  std::uint64_t node_budget = okd::kDefaultNodeBudget;
  std::size_t exact_cutoff = 18;
  std::size_t bruteforce_cutoff = 10;
  bool no_cross_check = false;
  int jobs = 0;
  double delta = 0.5;
  std::size_t grid_points = 11;
  // ingest
  std::string arrival_col = "arrival";
  std::string size_col = "size";
  std::string duration_col = "duration";
  std::string value_col;
  std::string start_col;
  std::string knapsack_policy = "replicate";
  std::string violation_policy = "clamp";
  double tolerance = 0.01;
};

int cmd_gen(const Options& o, CLI::App& app) {
  okd::GenParams params = o.gen;
  params.family = okd::parse_family(o.family);
  if (given(app, "--eps")) params.eps = o.eps;
  const okd::GenSpec spec = okd::make_gen_spec(params);
  okd::Json out;
  if (params.family == okd::Family::kStaircase && o.all_prefixes) {
    out = okd::Json::array();
    for (const auto& inst : okd::gen_staircase(spec, spec.levels)) out.push_back(okd::to_json(inst));
  } else {
    const okd::Instance inst = okd::generate(spec);
    std::cerr << "generated " << okd::family_name(params.family) << " instance: N="
              << inst.items.size() << " K=" << inst.knapsacks.size() << " T=" << inst.horizon
              << " seed=" << params.seed << "\n";
    out = okd::to_json(inst);
  }
  okd::write_text(o.out, dump(out));
  return kExitOk;
}

int cmd_validate(const Options& o, CLI::App& app) {
  const okd::ThresholdConfig config = parse_gamma(o.gamma);
  const okd::Instance inst = okd::instance_from_json(okd::read_json(o.input));
  std::vector<double> gammas;
  if (given(app, "--gamma")) gammas = okd::resolve_gammas(inst, config);
  try {
    const auto report = okd::validate_instance(inst, !o.lenient, gammas);
    okd::write_text(o.out, dump(okd::to_json(report)));
    std::cerr << (report.assumptions_hold() ? "valid" : "assumption violations found") << " ("
              << report.issues.size() << " issue(s))\n";
    return kExitOk;
  } catch (const okd::ValidationError& e) {
    okd::write_text(o.out, dump(okd::to_json(e.report())));
    std::cerr << "invalid: " << e.what() << "\n";
    return kExitFailure;
  }
}

int cmd_run(const Options& o) {
  const okd::ThresholdConfig config = parse_gamma(o.gamma);
  const okd::Instance inst = okd::instance_from_json(okd::read_json(o.input));
  const auto thresholds = okd::make_thresholds(inst, config);
  const okd::RunResult result = okd::run(inst, thresholds);
  std::size_t admitted = 0;
  for (const auto& d : result.decisions) admitted += d.admitted() ? 1 : 0;
  std::cerr << "ALG = " << okd::format_double(result.profit) << ", admitted " << admitted
            << " of " << result.decisions.size() << " items\n";
  okd::write_text(o.out, dump(okd::to_json(result)));
  return kExitOk;
}

int cmd_opt(const Options& o) {
  const okd::Instance inst = okd::instance_from_json(okd::read_json(o.input));
  const okd::OfflineSolution sol =
      o.bruteforce ? okd::solve_bruteforce(inst) : okd::solve_exact(inst, o.node_budget);
  std::cerr << (sol.exact() ? "OPT = " : "incumbent = ") << okd::format_double(sol.objective)
            << (sol.exact() ? "" : " (node budget exhausted, bound " +
                                       okd::format_double(sol.bound) + ")")
            << ", " << sol.nodes << " nodes\n";
  okd::write_text(o.out, dump(okd::to_json(sol)));
  return kExitOk;
}

okd::ExperimentConfig load_experiment(const Options& o, CLI::App& app) {
  okd::ExperimentConfig exp;
  if (!o.config.empty()) {
    const auto base = std::filesystem::path(o.config).parent_path();
    exp = okd::experiment_from_json(okd::read_json(o.config), base);
  } else {
    exp.instances = okd::suite_from_json(okd::read_json(o.input));
  }
  // explicit flags override the experiment file
  if (given(app, "--gamma")) exp.bench.thresholds = parse_gamma(o.gamma);
  if (given(app, "--exact-cutoff")) exp.bench.oracle.exact_cutoff = o.exact_cutoff;
  if (given(app, "--bruteforce-cutoff")) {
    exp.bench.oracle.bruteforce_cutoff = o.bruteforce_cutoff;
  }
  if (o.no_cross_check) exp.bench.oracle.cross_check = false;
  if (given(app, "--node-budget")) exp.bench.oracle.node_budget = o.node_budget;
  if (given(app, "--delta")) exp.tuner_delta = o.delta;
  if (given(app, "--grid-points")) exp.tuner_grid_points = o.grid_points;
  return exp;
}

int cmd_bench(const Options& o, CLI::App& app) {
  parse_gamma(o.gamma);
  set_jobs(o.jobs);
  const okd::ExperimentConfig exp = load_experiment(o, app);
  const okd::BenchReport report = okd::bench_suite(exp.instances, exp.bench);
  std::cerr << "instances " << report.rows.size() << " (exact " << report.exact_rows
            << ", bound-only " << report.bound_rows << ", errors " << report.error_rows
            << "); empirical CR = "
            << (report.suite_cr ? okd::format_double(*report.suite_cr) : std::string("n/a"))
            << "\n";
  if (o.out.empty() || o.out == "-") {
    okd::write_text("-", dump(okd::to_json(report)));
  } else {
    okd::write_text(o.out + ".csv", okd::report_csv(report));
    okd::write_text(o.out + ".json", dump(okd::to_json(report)));
  }
  return report.error_rows == 0 ? kExitOk : kExitFailure;
}

int cmd_tune(const Options& o, CLI::App& app) {
  set_jobs(o.jobs);
  const okd::ExperimentConfig exp = load_experiment(o, app);
  okd::TuneSpec spec;
  for (const auto& input : exp.instances) spec.training.push_back(input.instance);
  spec.delta = exp.tuner_delta;
  spec.grid_points = exp.tuner_grid_points;
  const okd::TuneResult result = okd::tune_gamma(spec);
  std::cerr << okd::TuneResult::kMethod << ": multiplier "
            << okd::format_double(result.multiplier) << " over " << spec.training.size()
            << " training instance(s)\n";
  if (o.out.empty() || o.out == "-") {
    okd::write_text("-", dump(okd::to_json(result)));
  } else {
    okd::write_text(o.out + ".json", dump(okd::to_json(result)));
    okd::write_text(o.out + "_curve.csv", okd::tune_curve_csv(result));
  }
  return kExitOk;
}

int cmd_ingest(const Options& o) {
  okd::TraceMapping mapping;
  mapping.arrival_column = o.arrival_col;
  mapping.size_column = o.size_col;
  mapping.duration_column = o.duration_col;
  if (!o.value_col.empty()) mapping.value_column = o.value_col;
  if (!o.start_col.empty()) mapping.start_column = o.start_col;
  mapping.error_tolerance = o.tolerance;
  mapping.knapsacks = okd::make_gen_spec(o.gen).knapsacks;
  if (o.knapsack_policy == "partition") {
    mapping.knapsack_policy = okd::KnapsackPolicy::kPartition;
  } else if (o.knapsack_policy != "replicate") {
    throw UsageError("--knapsack-policy must be replicate or partition");
  }
  if (o.violation_policy == "drop") {
    mapping.violation_policy = okd::ViolationPolicy::kDrop;
  } else if (o.violation_policy != "clamp") {
    throw UsageError("--violation-policy must be clamp or drop");
  }
  const okd::TraceIngest out = okd::ingest_trace(o.input, mapping);
  std::cerr << "rows read " << out.report.rows_read << ", kept " << out.report.rows_kept
            << ", clamped " << out.report.rows_clamped << ", dropped "
            << out.report.rows_dropped << ", unparseable " << out.report.unparseable_lines.size()
            << "\n";
  okd::write_text(o.out, dump(okd::to_json(out.instance)));
  return kExitOk;
}

void add_knapsack_flags(CLI::App* sub, Options& o) {
  sub->add_option("--k", o.gen.k, "Number of knapsacks");
  sub->add_option("--capacity", o.gen.capacity, "Knapsack capacity C");
  sub->add_option("--theta", o.gen.theta, "Value density ratio theta");
  sub->add_option("--alpha", o.gen.alpha, "Duration ratio alpha");
  sub->add_option("--dlo", o.gen.duration_lo, "Minimum duration");
  sub->add_option("--eps", o.eps, "Item size cap (default C ln2 / gamma, capped at C)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online multiple knapsack with departures: engine, oracle and benchmarks"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "Generate an instance (JSON)");
  gen->add_option("--family", o.family, "uniform | staircase | burst");
  gen->add_option("--n", o.gen.n, "Number of items");
  gen->add_option("--t", o.gen.horizon, "Horizon T (slots)");
  gen->add_option("--seed", o.gen.seed, "RNG seed");
  gen->add_option("--eligibility", o.gen.eligibility, "Probability an option is eligible");
  gen->add_option("--levels", o.gen.levels, "Staircase levels");
  gen->add_flag("--all-prefixes", o.all_prefixes, "Staircase: emit every prefix instance");
  gen->add_option("--out", o.out, "Output file (default stdout)");
  add_knapsack_flags(gen, o);

  auto* validate = app.add_subcommand("validate", "Check an instance against the assumptions");
  validate->add_option("--input", o.input, "Instance JSON ('-' for stdin)");
  validate->add_option("--gamma", o.gamma, "Also check the size precondition for this gamma");
  validate->add_flag("--lenient", o.lenient, "Report violations as warnings, exit 0");
  validate->add_option("--out", o.out, "Output file (default stdout)");

  auto* run = app.add_subcommand("run", "Run the online algorithm on an instance");
  run->add_option("--input", o.input, "Instance JSON ('-' for stdin)");
  run->add_option("--gamma", o.gamma, "Threshold gamma (number or auto)");
  run->add_option("--out", o.out, "Output file (default stdout)");

  auto* opt = app.add_subcommand("opt", "Solve the offline problem exactly");
  opt->add_option("--input", o.input, "Instance JSON ('-' for stdin)");
  opt->add_option("--node-budget", o.node_budget, "Branch-and-bound node budget");
  opt->add_flag("--bruteforce", o.bruteforce, "Use exhaustive enumeration");
  opt->add_option("--out", o.out, "Output file (default stdout)");

  auto* bench = app.add_subcommand("bench", "Empirical competitive ratio over a suite");
  auto* tune = app.add_subcommand("tune", "Grid-search gamma inside the safety band");
  for (auto* sub : {bench, tune}) {
    sub->add_option("--input", o.input, "Suite JSON: instance, array, or {instances: [...]}");
    sub->add_option("--config", o.config, "Experiment JSON file");
    sub->add_option("--jobs", o.jobs, "Worker threads");
    sub->add_option("--out", o.out, "Output base path (default: JSON on stdout)");
  }
  bench->add_option("--gamma", o.gamma, "Threshold gamma (number or auto)");
  bench->add_option("--exact-cutoff", o.exact_cutoff, "Exact OPT when N <= cutoff");
  bench->add_option("--bruteforce-cutoff", o.bruteforce_cutoff, "Cross-check when N <= cutoff");
  bench->add_flag("--no-cross-check", o.no_cross_check, "Skip brute-force cross-checks");
  bench->add_option("--node-budget", o.node_budget, "Branch-and-bound node budget");
  tune->add_option("--delta", o.delta, "Safety band half-width (relative)");
  tune->add_option("--grid-points", o.grid_points, "Grid size over the band");

  auto* ingest = app.add_subcommand("ingest", "Build an instance from a CSV job trace");
  ingest->add_option("--input", o.input, "CSV trace")->required();
  ingest->add_option("--arrival-col", o.arrival_col);
  ingest->add_option("--size-col", o.size_col);
  ingest->add_option("--duration-col", o.duration_col);
  ingest->add_option("--value-col", o.value_col);
  ingest->add_option("--start-col", o.start_col);
  ingest->add_option("--knapsack-policy", o.knapsack_policy, "replicate | partition");
  ingest->add_option("--violation-policy", o.violation_policy, "clamp | drop");
  ingest->add_option("--tolerance", o.tolerance, "Accepted fraction of unparseable rows");
  ingest->add_option("--out", o.out, "Output file (default stdout)");
  add_knapsack_flags(ingest, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(o, *gen);
    if (*validate) return cmd_validate(o, *validate);
    if (*run) return cmd_run(o);
    if (*opt) return cmd_opt(o);
    if (*bench) return cmd_bench(o, *bench);
    if (*tune) return cmd_tune(o, *tune);
    if (*ingest) return cmd_ingest(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
