#include "okd/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <iterator>
#include <sstream>

#include "okd/format.hpp"

namespace okd {

namespace {

// Typed access to a JSON object that rejects unknown keys up front.
class Fields {
 public:
  Fields(const Json& j, std::string what, std::initializer_list<const char*> allowed)
      : j_(j), what_(std::move(what)) {
    if (!j.is_object()) throw FormatError(what_ + ": expected a JSON object");
    for (const auto& [key, _] : j.items()) {
      bool known = false;
      for (const char* a : allowed) known = known || key == a;
      if (!known) throw FormatError(what_ + ": unknown field '" + key + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  const Json& raw(const char* key) const {
    if (!j_.contains(key)) throw FormatError(what_ + ": missing field '" + key + "'");
    return j_.at(key);
  }

  double number(const char* key) const {
    const Json& v = raw(key);
    if (!v.is_number()) throw FormatError(what_ + ": field '" + key + "' must be a number");
    return v.get<double>();
  }

  std::int64_t integer(const char* key) const {
    const Json& v = raw(key);
    if (!v.is_number_integer()) {
      throw FormatError(what_ + ": field '" + key + "' must be an integer");
    }
    return v.get<std::int64_t>();
  }

  std::size_t count(const char* key) const {
    const std::int64_t v = integer(key);
    if (v < 0) throw FormatError(what_ + ": field '" + key + "' must be nonnegative");
    return static_cast<std::size_t>(v);
  }

  bool boolean(const char* key) const {
    const Json& v = raw(key);
    if (!v.is_boolean()) throw FormatError(what_ + ": field '" + key + "' must be a boolean");
    return v.get<bool>();
  }

  std::string string(const char* key) const {
    const Json& v = raw(key);
    if (!v.is_string()) throw FormatError(what_ + ": field '" + key + "' must be a string");
    return v.get<std::string>();
  }

  const Json& array(const char* key) const {
    const Json& v = raw(key);
    if (!v.is_array()) throw FormatError(what_ + ": field '" + key + "' must be an array");
    return v;
  }

 private:
  const Json& j_;
  std::string what_;
};

Json number_or_inf(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json optional_index(const std::optional<std::size_t>& k) {
  return k ? Json(*k) : Json(nullptr);
}

const char* kind_name(OptKind kind) {
  switch (kind) {
    case OptKind::kExact:
      return "exact";
    case OptKind::kUpperBound:
      return "upper_bound";
    case OptKind::kError:
      return "error";
  }
  return "error";
}

}  // namespace

Instance instance_from_json(const Json& j) {
  Fields f(j, "instance", {"horizon", "knapsacks", "items"});
  Instance inst;
  inst.horizon = f.integer("horizon");
  for (const Json& kj : f.array("knapsacks")) {
    Fields kf(kj, "knapsack", {"capacity", "theta", "duration_lo", "duration_hi", "size_cap"});
    KnapsackSpec ks;
    ks.capacity = kf.number("capacity");
    ks.density_ratio = kf.number("theta");
    ks.duration_lo = kf.integer("duration_lo");
    ks.duration_hi = kf.integer("duration_hi");
    ks.size_cap = kf.number("size_cap");
    inst.knapsacks.push_back(ks);
  }
  for (const Json& ij : f.array("items")) {
    Fields itf(ij, "item", {"id", "arrival", "options"});
    Item item;
    item.id = itf.integer("id");
    item.arrival = itf.integer("arrival");
    const std::string where = "item " + std::to_string(item.id) + " option";
    for (const Json& oj : itf.array("options")) {
      Fields of(oj, where, {"eligible", "size", "value", "start", "duration"});
      ItemOption opt;
      opt.eligible = of.boolean("eligible");
      opt.size = of.number("size");
      opt.value = of.number("value");
      opt.interval.start = of.integer("start");
      opt.interval.duration = of.integer("duration");
      item.options.push_back(opt);
    }
    inst.items.push_back(std::move(item));
  }
  return inst;
}

Json to_json(const Instance& inst) {
  Json knapsacks = Json::array();
  for (const auto& ks : inst.knapsacks) {
    knapsacks.push_back({{"capacity", ks.capacity},
                         {"theta", ks.density_ratio},
                         {"duration_lo", ks.duration_lo},
                         {"duration_hi", ks.duration_hi},
                         {"size_cap", ks.size_cap}});
  }
  Json items = Json::array();
  for (const auto& item : inst.items) {
    Json options = Json::array();
    for (const auto& opt : item.options) {
      options.push_back({{"eligible", opt.eligible},
                         {"size", opt.size},
                         {"value", opt.value},
                         {"start", opt.interval.start},
                         {"duration", opt.interval.duration}});
    }
    items.push_back({{"id", item.id}, {"arrival", item.arrival}, {"options", options}});
  }
  return {{"horizon", inst.horizon}, {"knapsacks", knapsacks}, {"items", items}};
}

std::string suite_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04zu", index);
  return buf;
}

std::vector<BenchInput> suite_from_json(const Json& j) {
  const Json* list = &j;
  Json single;
  if (j.is_object() && j.contains("instances")) {
    Fields f(j, "suite", {"instances"});
    list = &f.array("instances");
  } else if (j.is_object()) {
    single = Json::array({j});
    list = &single;
  } else if (!j.is_array()) {
    throw FormatError("suite: expected an instance, an array, or {\"instances\": [...]}");
  }
  std::vector<BenchInput> out;
  for (std::size_t i = 0; i < list->size(); ++i) {
    out.push_back({suite_id(i), instance_from_json((*list)[i])});
  }
  return out;
}

ThresholdConfig threshold_config_from_json(const Json& j) {
  Fields f(j, "thresholds", {"kind", "gamma"});
  if (f.has("kind") && f.string("kind") != "exponential") {
    throw FormatError("thresholds: only kind \"exponential\" is configurable from files");
  }
  ThresholdConfig config;
  if (f.has("gamma")) {
    const Json& g = f.raw("gamma");
    if (g.is_string()) {
      if (g.get<std::string>() != "auto") {
        throw FormatError("thresholds: gamma must be a number or \"auto\"");
      }
    } else if (g.is_number()) {
      config.gamma = g.get<double>();
      if (!(*config.gamma > 0.0)) throw FormatError("thresholds: gamma must be > 0");
    } else if (g.is_array()) {
      for (const Json& x : g) {
        if (!x.is_number() || !(x.get<double>() > 0.0)) {
          throw FormatError("thresholds: per-knapsack gammas must be positive numbers");
        }
        config.per_knapsack.push_back(x.get<double>());
      }
    } else {
      throw FormatError("thresholds: gamma must be a number or \"auto\"");
    }
  }
  return config;
}

Json to_json(const ThresholdConfig& config) {
  Json gamma;
  if (!config.per_knapsack.empty()) {
    gamma = config.per_knapsack;
  } else if (config.gamma) {
    gamma = *config.gamma;
  } else {
    gamma = "auto";
  }
  return {{"kind", "exponential"}, {"gamma", gamma}};
}

Json to_json(const RunResult& result) {
  Json decisions = Json::array();
  Json items = Json::array();
  for (std::size_t i = 0; i < result.decisions.size(); ++i) {
    const auto& d = result.decisions[i];
    decisions.push_back({{"item", d.item_id}, {"knapsack", optional_index(d.knapsack)}});
    const auto& tr = result.trace[i];
    Json phi = Json::array();
    Json admissible = Json::array();
    for (std::size_t k = 0; k < tr.phi.size(); ++k) {
      phi.push_back(tr.phi[k] ? Json(*tr.phi[k]) : Json(nullptr));
      admissible.push_back(tr.admissible[k] ? Json(*tr.admissible[k]) : Json(nullptr));
    }
    items.push_back({{"item", tr.item_id},
                     {"phi", phi},
                     {"admissible", admissible},
                     {"admitted", d.admitted()},
                     {"knapsack", optional_index(d.knapsack)}});
  }
  Json utilization = Json::array();
  for (std::size_t k = 0; k < result.final_state.num_knapsacks(); ++k) {
    Json slots = Json::array();
    for (const auto& [t, z] : result.final_state.occupied(k)) slots.push_back({t, z});
    utilization.push_back(slots);
  }
  return {{"profit", result.profit},
          {"decisions", decisions},
          {"items", items},
          {"final_utilization", utilization}};
}

Json to_json(const OfflineSolution& solution) {
  Json assignment = Json::array();
  for (const auto& k : solution.assignment) assignment.push_back(optional_index(k));
  return {{"objective", solution.objective},
          {"bound", solution.bound},
          {"proof", solution.exact() ? "exact" : "upper_bound_only"},
          {"nodes", solution.nodes},
          {"assignment", assignment}};
}

Json to_json(const ValidationReport& report) {
  Json knapsacks = Json::array();
  for (const auto& k : report.knapsacks) {
    Json kj = {{"eligible_options", k.eligible_options},
               {"density_observed", {k.density_min, k.density_max}},
               {"density_declared", {1.0, k.density_ratio}},
               {"duration_observed", {k.duration_min, k.duration_max}},
               {"duration_declared", {k.duration_lo, k.duration_hi}},
               {"size_max", k.size_max},
               {"size_cap", k.size_cap}};
    if (k.gamma) {
      kj["gamma"] = *k.gamma;
      kj["size_precondition"] = *k.size_precondition;
    }
    knapsacks.push_back(kj);
  }
  Json issues = Json::array();
  for (const auto& issue : report.issues) {
    Json ij = {{"severity", issue.severity == Severity::kError ? "error" : "warning"},
               {"message", issue.message}};
    if (issue.knapsack) ij["knapsack"] = *issue.knapsack;
    if (issue.item) ij["item"] = *issue.item;
    issues.push_back(ij);
  }
  return {{"strict", report.strict},
          {"assumptions_hold", report.assumptions_hold()},
          {"violations", report.violations},
          {"knapsacks", knapsacks},
          {"issues", issues}};
}

Json to_json(const BenchReport& report) {
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    Json r = {{"instance", row.id},
              {"n", row.n},
              {"k", row.k},
              {"alg", row.alg},
              {"opt", row.opt},
              {"opt_kind", kind_name(row.kind)},
              {"ratio", number_or_inf(row.ratio)},
              {"bruteforce_checked", row.bruteforce_checked},
              {"gammas", row.gammas}};
    if (!row.error.empty()) r["error"] = row.error;
    rows.push_back(r);
  }
  return {
      {"suite_cr", report.suite_cr ? number_or_inf(*report.suite_cr) : Json(nullptr)},
      {"suite_cr_infinite", report.suite_cr && std::isinf(*report.suite_cr)},
      {"mean_ratio", report.mean_ratio ? Json(*report.mean_ratio) : Json(nullptr)},
      {"instances", report.rows.size()},
      {"exact_rows", report.exact_rows},
      {"bound_rows", report.bound_rows},
      {"error_rows", report.error_rows},
      {"config",
       {{"thresholds", to_json(report.config.thresholds)},
        {"oracle",
         {{"exact_cutoff", report.config.oracle.exact_cutoff},
          {"bruteforce_cutoff", report.config.oracle.bruteforce_cutoff},
          {"cross_check", report.config.oracle.cross_check},
          {"node_budget", report.config.oracle.node_budget}}}}},
      {"rows", rows}};
}

Json to_json(const TuneResult& result) {
  Json curve = Json::array();
  for (const auto& p : result.curve) {
    curve.push_back(
        {{"multiplier", p.multiplier}, {"gammas", p.gammas}, {"mean_profit", p.mean_profit}});
  }
  return {{"method", TuneResult::kMethod},
          {"multiplier", result.multiplier},
          {"gammas", result.gammas},
          {"gamma_default", result.gamma_default},
          {"gamma_lo", result.gamma_lo},
          {"gamma_hi", result.gamma_hi},
          {"curve", curve}};
}

std::string tune_curve_csv(const TuneResult& result) {
  std::ostringstream os;
  os << "multiplier,gammas,mean_profit\n";
  for (const auto& p : result.curve) {
    os << format_double(p.multiplier) << ',';
    for (std::size_t i = 0; i < p.gammas.size(); ++i) {
      if (i) os << ';';
      os << format_double(p.gammas[i]);
    }
    os << ',' << format_double(p.mean_profit) << '\n';
  }
  return os.str();
}

GenParams gen_params_from_json(const Json& j) {
  Fields f(j, "generate",
           {"family", "n", "k", "t", "capacity", "theta", "alpha", "eps", "duration_lo", "seed",
            "eligibility", "levels"});
  GenParams p;
  if (f.has("family")) p.family = parse_family(f.string("family"));
  if (f.has("n")) p.n = f.count("n");
  if (f.has("k")) p.k = f.count("k");
  if (f.has("t")) p.horizon = f.integer("t");
  if (f.has("capacity")) p.capacity = f.number("capacity");
  if (f.has("theta")) p.theta = f.number("theta");
  if (f.has("alpha")) p.alpha = f.number("alpha");
  if (f.has("eps")) p.eps = f.number("eps");
  if (f.has("duration_lo")) p.duration_lo = f.integer("duration_lo");
  if (f.has("seed")) p.seed = static_cast<std::uint64_t>(f.integer("seed"));
  if (f.has("eligibility")) p.eligibility = f.number("eligibility");
  if (f.has("levels")) p.levels = f.count("levels");
  return p;
}

ExperimentConfig experiment_from_json(const Json& j, const std::filesystem::path& base_dir) {
  Fields f(j, "experiment", {"instances", "thresholds", "oracle", "tuner"});
  ExperimentConfig config;
  for (const Json& entry : f.array("instances")) {
    if (entry.is_string()) {
      std::filesystem::path p = entry.get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      for (auto& input : suite_from_json(read_json(p.string()))) {
        config.instances.push_back(std::move(input));
      }
      continue;
    }
    Fields ef(entry, "instance source", {"generate", "count"});
    GenParams params = gen_params_from_json(ef.raw("generate"));
    const std::size_t count = ef.has("count") ? ef.count("count") : 1;
    for (std::size_t c = 0; c < count; ++c) {
      GenParams pc = params;
      pc.seed = params.seed + c;
      const GenSpec spec = make_gen_spec(pc);
      if (spec.family == Family::kStaircase) {
        for (auto& prefix : gen_staircase(spec, spec.levels)) {
          config.instances.push_back({"", std::move(prefix)});
        }
      } else {
        config.instances.push_back({"", generate(spec)});
      }
    }
  }
  for (std::size_t i = 0; i < config.instances.size(); ++i) {
    config.instances[i].id = suite_id(i);
  }
  if (f.has("thresholds")) config.bench.thresholds = threshold_config_from_json(f.raw("thresholds"));
  if (f.has("oracle")) {
    Fields of(f.raw("oracle"), "oracle",
              {"exact_cutoff", "bruteforce_cutoff", "cross_check", "node_budget"});
    auto& o = config.bench.oracle;
    if (of.has("exact_cutoff")) o.exact_cutoff = of.count("exact_cutoff");
    if (of.has("bruteforce_cutoff")) o.bruteforce_cutoff = of.count("bruteforce_cutoff");
    if (of.has("cross_check")) o.cross_check = of.boolean("cross_check");
    if (of.has("node_budget")) o.node_budget = of.count("node_budget");
  }
  if (f.has("tuner")) {
    Fields tf(f.raw("tuner"), "tuner", {"delta", "grid_points"});
    if (tf.has("delta")) config.tuner_delta = tf.number("delta");
    if (tf.has("grid_points")) config.tuner_grid_points = tf.count("grid_points");
  }
  return config;
}

Json read_json(const std::string& path) {
  try {
    if (path.empty() || path == "-") return Json::parse(std::cin);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError((path.empty() || path == "-" ? std::string("<stdin>") : path) +
                      ": invalid JSON: " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace okd
