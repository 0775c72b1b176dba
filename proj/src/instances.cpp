#include "okd/instances.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "okd/rng.hpp"
#include "okd/threshold.hpp"

namespace okd {

namespace {

void check_spec(const GenSpec& spec) {
  if (spec.knapsacks.empty()) throw GenSpecError("generator needs at least one knapsack");
  if (spec.horizon < 1) throw GenSpecError("horizon must be >= 1");
  if (!(spec.eligibility > 0.0 && spec.eligibility <= 1.0)) {
    throw GenSpecError("eligibility probability must be in (0, 1]");
  }
  for (std::size_t k = 0; k < spec.knapsacks.size(); ++k) {
    const auto& ks = spec.knapsacks[k];
    const std::string at = "knapsack " + std::to_string(k) + ": ";
    if (!(ks.capacity > 0.0) || !std::isfinite(ks.capacity)) {
      throw GenSpecError(at + "capacity must be > 0");
    }
    if (!(ks.density_ratio >= 1.0) || !std::isfinite(ks.density_ratio)) {
      throw GenSpecError(at + "theta must be >= 1");
    }
    if (ks.duration_lo < 1 || ks.duration_hi < ks.duration_lo) {
      throw GenSpecError(at + "need 1 <= duration_lo <= duration_hi");
    }
    if (ks.duration_hi > spec.horizon) {
      throw GenSpecError(at + "duration_hi " + std::to_string(ks.duration_hi) +
                         " exceeds horizon " + std::to_string(spec.horizon));
    }
    if (!(ks.size_cap > 0.0) || ks.size_cap > ks.capacity) {
      throw GenSpecError(at + "need 0 < size_cap <= capacity");
    }
  }
}

ItemOption draw_option(Rng& rng, const KnapsackSpec& ks, Slot arrival) {
  ItemOption opt;
  opt.interval.start = arrival;
  opt.interval.duration = rng.integer(ks.duration_lo, ks.duration_hi);
  opt.size = rng.uniform_open_closed(ks.size_cap);
  const double density = rng.uniform(1.0, ks.density_ratio);
  opt.value = density * opt.size * static_cast<double>(opt.interval.duration);
  opt.eligible = true;
  return opt;
}

Instance fill_items(const GenSpec& spec, Rng& rng, std::vector<Slot> arrivals) {
  std::sort(arrivals.begin(), arrivals.end());
  const std::size_t K = spec.knapsacks.size();

  Instance inst;
  inst.horizon = spec.horizon;
  inst.knapsacks = spec.knapsacks;
  inst.items.reserve(arrivals.size());
  for (std::size_t n = 0; n < arrivals.size(); ++n) {
    Item item;
    item.id = static_cast<std::int64_t>(n);
    item.arrival = arrivals[n];
    item.options.reserve(K);
    bool any = false;
    for (std::size_t k = 0; k < K; ++k) {
      ItemOption opt = draw_option(rng, spec.knapsacks[k], item.arrival);
      if (spec.eligibility < 1.0) opt.eligible = rng.bernoulli(spec.eligibility);
      any = any || opt.eligible;
      item.options.push_back(opt);
    }
    if (!any) {
      item.options[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(K) - 1))]
          .eligible = true;
    }
    for (auto& opt : item.options) {
      if (!opt.eligible) opt.size = opt.value = 0.0;
    }
    inst.items.push_back(std::move(item));
  }
  return inst;
}

Slot last_arrival_slot(const GenSpec& spec) {
  Slot dmax = 1;
  for (const auto& ks : spec.knapsacks) dmax = std::max(dmax, ks.duration_hi);
  return std::max<Slot>(1, spec.horizon - dmax);
}

}  // namespace

Instance gen_uniform(const GenSpec& spec) {
  check_spec(spec);
  Rng rng(spec.seed);
  const Slot hi = last_arrival_slot(spec);
  std::vector<Slot> arrivals(spec.n);
  for (auto& a : arrivals) a = rng.integer(1, hi);
  return fill_items(spec, rng, std::move(arrivals));
}

Instance gen_burst(const GenSpec& spec) {
  check_spec(spec);
  Rng rng(spec.seed);
  const Slot hi = last_arrival_slot(spec);
  const std::size_t groups = std::max<std::size_t>(1, spec.n / 8);
  std::vector<Slot> centers(groups);
  for (auto& c : centers) c = rng.integer(1, hi);
  std::vector<Slot> arrivals(spec.n);
  for (auto& a : arrivals) {
    a = centers[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(groups) - 1))];
  }
  return fill_items(spec, rng, std::move(arrivals));
}

std::vector<Instance> gen_staircase(const GenSpec& spec, std::size_t levels) {
  check_spec(spec);
  if (spec.knapsacks.size() != 1) throw GenSpecError("staircase family requires K = 1");
  if (levels < 2) throw GenSpecError("staircase family requires at least 2 levels");
  const KnapsackSpec& ks = spec.knapsacks.front();
  const Slot duration = ks.duration_lo;

  // m equal items per batch with size C/m <= eps whose in-order sum stays
  // within C.
  const auto per_batch = static_cast<std::size_t>(std::ceil(ks.capacity / ks.size_cap));
  double size = ks.capacity / static_cast<double>(per_batch);
  auto batch_total = [&] {
    double z = 0.0;
    for (std::size_t i = 0; i < per_batch; ++i) z += size;
    return z;
  };
  while (batch_total() > ks.capacity || size > ks.size_cap) size = std::nextafter(size, 0.0);

  std::vector<Instance> prefixes;
  prefixes.reserve(levels);
  Instance inst;
  inst.horizon = spec.horizon;
  inst.knapsacks = spec.knapsacks;
  for (std::size_t level = 0; level < levels; ++level) {
    const double density = level == 0 ? 1.0
                                       : std::pow(ks.density_ratio,
                                                  static_cast<double>(level) /
                                                      static_cast<double>(levels - 1));
    for (std::size_t i = 0; i < per_batch; ++i) {
      Item item;
      item.id = static_cast<std::int64_t>(inst.items.size());
      item.arrival = 1;
      ItemOption opt;
      opt.eligible = true;
      opt.size = size;
      opt.interval = {1, duration};
      opt.value = density * size * static_cast<double>(duration);
      item.options.push_back(opt);
      inst.items.push_back(std::move(item));
    }
    prefixes.push_back(inst);
  }
  return prefixes;
}

Instance generate(const GenSpec& spec) {
  switch (spec.family) {
    case Family::kUniform:
      return gen_uniform(spec);
    case Family::kBurst:
      return gen_burst(spec);
    case Family::kStaircase:
      return gen_staircase(spec, spec.levels).back();
  }
  throw GenSpecError("unknown family");
}

GenSpec make_gen_spec(const GenParams& params) {
  if (params.k == 0) throw GenSpecError("k must be >= 1");
  if (!(params.alpha >= 1.0)) throw GenSpecError("alpha must be >= 1");
  if (!(params.theta >= 1.0)) throw GenSpecError("theta must be >= 1");
  if (params.duration_lo < 1) throw GenSpecError("duration_lo must be >= 1");
  KnapsackSpec ks;
  ks.capacity = params.capacity;
  ks.density_ratio = params.theta;
  ks.duration_lo = params.duration_lo;
  ks.duration_hi = std::max<Slot>(
      params.duration_lo,
      std::llround(static_cast<double>(params.duration_lo) * params.alpha));
  ks.size_cap = params.eps.value_or(
      std::min(params.capacity,
               size_precondition(params.capacity,
                                 default_gamma(params.theta, ks.duration_ratio()))));

  GenSpec spec;
  spec.family = params.family;
  spec.n = params.n;
  spec.horizon = params.horizon;
  spec.knapsacks.assign(params.k, ks);
  spec.seed = params.seed;
  spec.eligibility = params.eligibility;
  spec.levels = params.levels;
  return spec;
}

Family parse_family(const std::string& name) {
  if (name == "uniform") return Family::kUniform;
  if (name == "staircase") return Family::kStaircase;
  if (name == "burst") return Family::kBurst;
  throw GenSpecError("unknown family '" + name + "' (expected uniform, staircase, burst)");
}

const char* family_name(Family family) {
  switch (family) {
    case Family::kUniform:
      return "uniform";
    case Family::kStaircase:
      return "staircase";
    case Family::kBurst:
      return "burst";
  }
  return "uniform";
}

// --- trace ingestion ---------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      out.push_back(trim(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  out.push_back(trim(field));
  return out;
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<Slot> parse_slot(const std::string& s) {
  Slot v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

struct Row {
  std::size_t line = 0;
  Slot arrival = 0;
  Slot start = 0;
  Slot duration = 0;
  double size = 0.0;
  std::optional<double> value;
};

}  // namespace

TraceIngest ingest_trace(const std::filesystem::path& path, const TraceMapping& mapping) {
  std::ifstream in(path);
  if (!in) throw TraceError("cannot open trace file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ingest_trace_text(buf.str(), mapping);
}

TraceIngest ingest_trace_text(const std::string& csv, const TraceMapping& mapping) {
  if (mapping.knapsacks.empty()) throw TraceError("trace mapping needs at least one knapsack");
  if (mapping.horizon && *mapping.horizon < 1) throw TraceError("trace horizon must be >= 1");
  const std::size_t K = mapping.knapsacks.size();

  std::istringstream in(csv);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_csv(line);
      break;
    }
  }
  if (header.empty()) throw TraceError("trace has no header row");

  auto column = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw TraceError("trace is missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_arrival = column(mapping.arrival_column);
  const std::size_t c_size = column(mapping.size_column);
  const std::size_t c_duration = column(mapping.duration_column);
  const std::optional<std::size_t> c_value =
      mapping.value_column ? std::optional(column(*mapping.value_column)) : std::nullopt;
  const std::optional<std::size_t> c_start =
      mapping.start_column ? std::optional(column(*mapping.start_column)) : std::nullopt;

  IngestReport report;
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++report.rows_read;
    const auto fields = split_csv(line);
    if (fields.size() != header.size()) {
      report.unparseable_lines.push_back(line_no);
      continue;
    }
    Row row;
    row.line = line_no;
    const auto arrival = parse_slot(fields[c_arrival]);
    const auto duration = parse_slot(fields[c_duration]);
    const auto size = parse_number(fields[c_size]);
    const auto start = c_start ? parse_slot(fields[*c_start]) : arrival;
    std::optional<double> value;
    if (c_value) value = parse_number(fields[*c_value]);
    if (!arrival || !duration || !size || !start || (c_value && !value) || *arrival < 1 ||
        *start < 1 || *duration < 1 || !(*size > 0.0) || (value && !(*value > 0.0))) {
      report.unparseable_lines.push_back(line_no);
      continue;
    }
    row.arrival = *arrival;
    row.start = *start;
    row.duration = *duration;
    row.size = *size;
    row.value = value;
    rows.push_back(row);
  }

  if (!report.unparseable_lines.empty() &&
      static_cast<double>(report.unparseable_lines.size()) >
          mapping.error_tolerance * static_cast<double>(report.rows_read)) {
    std::ostringstream os;
    os << report.unparseable_lines.size() << " of " << report.rows_read
       << " trace rows unparseable (tolerance " << mapping.error_tolerance << "); lines:";
    for (std::size_t i = 0; i < report.unparseable_lines.size() && i < 20; ++i) {
      os << ' ' << report.unparseable_lines[i];
    }
    if (report.unparseable_lines.size() > 20) os << " ...";
    throw TraceError(os.str());
  }

  const bool clamp = mapping.violation_policy == ViolationPolicy::kClamp;
  std::vector<Item> items;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    if (mapping.horizon && row.arrival > *mapping.horizon) {
      ++report.rows_dropped;
      continue;
    }
    Item item;
    item.arrival = row.arrival;
    item.options.resize(K);
    bool clamped = false;
    bool any = false;
    for (std::size_t k = 0; k < K; ++k) {
      if (mapping.knapsack_policy == KnapsackPolicy::kPartition && r % K != k) continue;
      const KnapsackSpec& ks = mapping.knapsacks[k];
      ItemOption opt;
      opt.interval = {row.start, row.duration};
      opt.size = row.size;
      const double density_default =
          mapping.density_default.value_or((1.0 + ks.density_ratio) / 2.0);
      bool violates = false;

      if (opt.interval.duration < ks.duration_lo || opt.interval.duration > ks.duration_hi) {
        violates = true;
        opt.interval.duration = std::clamp(opt.interval.duration, ks.duration_lo, ks.duration_hi);
      }
      if (opt.size > ks.size_cap) {
        violates = true;
        opt.size = ks.size_cap;
      }
      const double area = opt.size * static_cast<double>(opt.interval.duration);
      opt.value = row.value.value_or(density_default * area);
      if (opt.value < area) {
        violates = true;
        opt.value = area;
      } else if (opt.value > ks.density_ratio * area) {
        violates = true;
        opt.value = ks.density_ratio * area;
      }
      if (mapping.horizon && opt.interval.last() > *mapping.horizon) continue;
      if (violates && !clamp) continue;
      clamped = clamped || violates;
      opt.eligible = true;
      any = true;
      item.options[k] = opt;
    }
    if (!any) {
      ++report.rows_dropped;
      continue;
    }
    if (clamped) ++report.rows_clamped;
    items.push_back(std::move(item));
  }

  std::stable_sort(items.begin(), items.end(),
                   [](const Item& a, const Item& b) { return a.arrival < b.arrival; });
  Instance inst;
  inst.knapsacks = mapping.knapsacks;
  Slot horizon = 0;
  for (std::size_t n = 0; n < items.size(); ++n) {
    items[n].id = static_cast<std::int64_t>(n);
    horizon = std::max(horizon, items[n].arrival);
    for (const auto& opt : items[n].options) {
      if (opt.eligible) horizon = std::max(horizon, opt.interval.last());
    }
  }
  inst.horizon = mapping.horizon.value_or(horizon);
  inst.items = std::move(items);
  report.rows_kept = inst.items.size();
  check_structure(inst);
  return {std::move(inst), report};
}

}  // namespace okd
