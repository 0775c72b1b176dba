#include "okd/bench.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "okd/engine.hpp"
#include "okd/format.hpp"

namespace okd {

double competitive_ratio(double opt, double alg) {
  if (alg == 0.0) return opt == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return opt / alg;
}

BenchRow evaluate_instance(const BenchInput& input, const BenchConfig& config) {
  BenchRow row;
  row.id = input.id;
  row.n = input.instance.items.size();
  row.k = input.instance.knapsacks.size();
  try {
    row.gammas = resolve_gammas(input.instance, config.thresholds);
    const auto thresholds = make_thresholds(input.instance, config.thresholds);
    row.alg = run(input.instance, thresholds).profit;

    if (row.n <= config.oracle.exact_cutoff) {
      const OfflineSolution sol = solve_exact(input.instance, config.oracle.node_budget);
      row.opt = sol.exact() ? sol.objective : sol.bound;
      row.kind = sol.exact() ? OptKind::kExact : OptKind::kUpperBound;
      if (sol.exact() && config.oracle.cross_check &&
          row.n <= config.oracle.bruteforce_cutoff) {
        try {
          const OfflineSolution bf = solve_bruteforce(input.instance);
          row.bruteforce_checked = true;
          if (bf.objective != sol.objective) {
            row.kind = OptKind::kError;
            row.error = "oracle mismatch: branch-and-bound " + format_double(sol.objective) +
                        " vs brute force " + format_double(bf.objective);
          }
        } catch (const OracleSizeError&) {
          // too large to enumerate; the exact result stands unchecked
        }
      }
    } else {
      row.opt = upper_bound(input.instance);
      row.kind = OptKind::kUpperBound;
    }
    row.ratio = competitive_ratio(row.opt, row.alg);
  } catch (const std::exception& e) {
    row.kind = OptKind::kError;
    row.error = e.what();
    row.ratio = 1.0;
  }
  if (row.kind == OptKind::kError) row.ratio = 1.0;
  return row;
}

std::vector<BenchRow> evaluate_rows_serial(std::span<const BenchInput> suite,
                                           const BenchConfig& config) {
  std::vector<BenchRow> rows(suite.size());
  for (std::size_t i = 0; i < suite.size(); ++i) rows[i] = evaluate_instance(suite[i], config);
  return rows;
}

std::vector<BenchRow> evaluate_rows(std::span<const BenchInput> suite,
                                    const BenchConfig& config) {
  std::vector<BenchRow> rows(suite.size());
  const auto count = static_cast<std::int64_t>(suite.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    rows[static_cast<std::size_t>(i)] =
        evaluate_instance(suite[static_cast<std::size_t>(i)], config);
  }
  return rows;
}

BenchReport assemble_report(std::vector<BenchRow> rows, const BenchConfig& config) {
  BenchReport report;
  report.config = config;
  double ratio_sum = 0.0;
  std::size_t finite = 0;
  for (const auto& row : rows) {
    switch (row.kind) {
      case OptKind::kExact:
        ++report.exact_rows;
        report.suite_cr = std::max(report.suite_cr.value_or(row.ratio), row.ratio);
        if (!row.infinite()) {
          ratio_sum += row.ratio;
          ++finite;
        }
        break;
      case OptKind::kUpperBound:
        ++report.bound_rows;
        break;
      case OptKind::kError:
        ++report.error_rows;
        break;
    }
  }
  if (finite > 0) report.mean_ratio = ratio_sum / static_cast<double>(finite);

  std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    const bool ea = a.kind == OptKind::kError;
    const bool eb = b.kind == OptKind::kError;
    if (ea != eb) return eb;
    if (a.ratio != b.ratio) return a.ratio > b.ratio;
    return a.id < b.id;
  });
  report.rows = std::move(rows);
  return report;
}

BenchReport bench_suite(std::span<const BenchInput> suite, const BenchConfig& config) {
  return assemble_report(evaluate_rows(suite, config), config);
}

BenchReport bench_suite_serial(std::span<const BenchInput> suite, const BenchConfig& config) {
  return assemble_report(evaluate_rows_serial(suite, config), config);
}

namespace {

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

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c == '\n' ? ' ' : c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string report_csv(const BenchReport& report) {
  std::ostringstream os;
  os << "instance,n,k,alg,opt,opt_kind,ratio,bruteforce_checked,gammas,error\n";
  for (const auto& row : report.rows) {
    std::string gammas;
    for (std::size_t i = 0; i < row.gammas.size(); ++i) {
      if (i) gammas += ';';
      gammas += format_double(row.gammas[i]);
    }
    os << csv_escape(row.id) << ',' << row.n << ',' << row.k << ',' << format_double(row.alg)
       << ',' << format_double(row.opt) << ',' << kind_name(row.kind) << ','
       << (row.infinite() ? std::string("inf") : format_double(row.ratio)) << ','
       << (row.bruteforce_checked ? 1 : 0) << ',' << gammas << ',' << csv_escape(row.error)
       << '\n';
  }
  return os.str();
}

// --- gamma tuning ------------------------------------------------------------

std::vector<double> band_grid(double delta, std::size_t points) {
  if (points == 0) throw std::invalid_argument("grid needs at least one point");
  const double lo = 1.0 - delta;
  const double hi = 1.0 + delta;
  if (points == 1) return {1.0};
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double m = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    grid[i] = std::clamp(m, lo, hi);
  }
  grid.back() = hi;
  return grid;
}

double mean_profit(std::span<const Instance> training, const std::vector<double>& gammas) {
  if (training.empty()) return 0.0;
  ThresholdConfig config;
  config.per_knapsack = gammas;
  double total = 0.0;
  for (const Instance& inst : training) total += run(inst, make_thresholds(inst, config)).profit;
  return total / static_cast<double>(training.size());
}

TuneResult tune_gamma(const TuneSpec& spec) {
  if (spec.training.empty()) throw std::invalid_argument("tune_gamma: empty training set");
  if (!(spec.delta >= 0.0 && spec.delta < 1.0)) {
    throw std::invalid_argument("tune_gamma: delta must be in [0, 1)");
  }
  const auto& knapsacks = spec.training.front().knapsacks;
  const std::size_t K = knapsacks.size();
  for (const Instance& inst : spec.training) {
    if (inst.knapsacks.size() != K) {
      throw std::invalid_argument("tune_gamma: training instances disagree on K");
    }
    for (std::size_t k = 0; k < K; ++k) {
      if (inst.knapsacks[k].density_ratio != knapsacks[k].density_ratio ||
          inst.knapsacks[k].duration_ratio() != knapsacks[k].duration_ratio()) {
        throw std::invalid_argument(
            "tune_gamma: training instances disagree on declared theta/alpha");
      }
    }
  }

  const double lo = 1.0 - spec.delta;
  const double hi = 1.0 + spec.delta;
  const std::vector<double> grid =
      spec.grid.empty() ? band_grid(spec.delta, spec.grid_points) : spec.grid;
  if (grid.empty()) throw std::invalid_argument("tune_gamma: empty grid");
  for (double m : grid) {
    if (!(m >= lo && m <= hi)) {
      throw std::invalid_argument("tune_gamma: grid multiplier " + format_double(m) +
                                  " outside safety band [" + format_double(lo) + ", " +
                                  format_double(hi) + "]");
    }
  }

  TuneResult result;
  for (const auto& ks : knapsacks) {
    const double g = default_gamma(ks.density_ratio, ks.duration_ratio());
    result.gamma_default.push_back(g);
    result.gamma_lo.push_back(lo * g);
    result.gamma_hi.push_back(hi * g);
  }

  result.curve.resize(grid.size());
  const auto count = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    TunePoint& p = result.curve[static_cast<std::size_t>(i)];
    p.multiplier = grid[static_cast<std::size_t>(i)];
    for (double g : result.gamma_default) p.gammas.push_back(p.multiplier * g);
    p.mean_profit = mean_profit(spec.training, p.gammas);
  }

  const TunePoint* best = &result.curve.front();
  for (const TunePoint& p : result.curve) {
    if (p.mean_profit > best->mean_profit) {
      best = &p;
    } else if (p.mean_profit == best->mean_profit) {
      const double dp = std::abs(p.multiplier - 1.0);
      const double db = std::abs(best->multiplier - 1.0);
      if (dp < db || (dp == db && p.multiplier < best->multiplier)) best = &p;
    }
  }
  result.multiplier = best->multiplier;
  result.gammas = best->gammas;
  return result;
}

}  // namespace okd
