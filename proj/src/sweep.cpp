#include "quantcap/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "quantcap/quantizer_design.hpp"

namespace quantcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct TableRow {
  const char* scheme;
  double tolerance;
  std::vector<double> values;       // NaN marks an infeasible reference entry
  std::vector<bool> gated;          // per-cell; empty means all gated
};

struct TableSpec {
  int id;
  std::vector<double> points;  // snr_db (tables 1-3) or rate (table 4)
  std::vector<TableRow> rows;
};

const double kDash = std::numeric_limits<double>::quiet_NaN();

// Embedded reference values; closed-form-backed rows carry 0.001 bits,
// optimizer-backed rows the search tolerance of the matching scheme.
const std::vector<TableSpec>& table_specs() {
  static const std::vector<TableSpec> specs = {
      {1,
       {-10.0, -5.0, 0.0, 7.0, 15.0},
       {
           // The 15 dB entry disagrees with both the closed form and the
           // cross-precision table; it is kept for reference but not gated.
           {"1bit-opt", 0.001, {0.0449, 0.1353, 0.3689, 0.9020, 0.9974},
            {true, true, true, true, false}},
           {"2bit-opt", 0.005, {0.0613, 0.1792, 0.4552, 1.0981, 1.9304}, {}},
           {"2bit-bench", 0.001, {0.0527, 0.1658, 0.4401, 1.0639, 1.9211}, {}},
       }},
      {2,
       {-10.0, 0.0, 5.0, 10.0, 20.0},
       {
           {"3bit-opt", 0.01, {0.0667, 0.4817, 0.9753, 1.5844, 2.8367}, {}},
           {"3bit-bench", 0.001, {0.0557, 0.4707, 0.9547, 1.5332, 2.8084}, {}},
       }},
      {3,
       {-5.0, 0.0, 5.0, 10.0, 15.0},
       {
           {"1bit-opt", 0.001, {0.1353, 0.3689, 0.7684, 0.9908, 0.9999}, {}},
           {"2bit-opt", 0.005, {0.1792, 0.4552, 0.8889, 1.4731, 1.9304}, {}},
           {"3bit-opt", 0.01, {0.1926, 0.4817, 0.9753, 1.5844, 2.2538}, {}},
           {"unquantized", 0.001, {0.1982, 0.5000, 1.0286, 1.7297, 2.5138}, {}},
       }},
      {4,
       {0.25, 0.5, 1.0, 1.73, 2.5},
       {
           {"1bit-opt", 0.05, {-2.04, 1.79, kDash, kDash, kDash}, {}},
           {"2bit-opt", 0.15, {-3.32, 0.59, 6.13, 12.30, kDash}, {}},
           {"3bit-opt", 0.30, {-3.67, 0.23, 5.19, 11.04, 16.90}, {}},
           {"unquantized", 0.02, {-3.83, 0.00, 4.77, 10.00, 14.91}, {}},
       }},
  };
  return specs;
}

int multistart_for_tables() { return 3; }

}  // namespace

const std::vector<std::string>& scheme_labels() {
  static const std::vector<std::string> labels = {"1bit-opt",   "2bit-opt",
                                                  "2bit-bench", "3bit-opt",
                                                  "3bit-bench", "unquantized"};
  return labels;
}

double awgn_capacity(const ChannelParams& params) {
  return 0.5 * std::log1p(params.snr()) / std::numbers::ln2;
}

SchemeEval evaluate_scheme(const std::string& scheme, double snr_db,
                           const SolverOptions& opts) {
  const ChannelParams params = ChannelParams::from_snr_db(snr_db);
  SchemeEval ev;
  if (scheme == "unquantized") {
    ev.value = awgn_capacity(params);
  } else if (scheme == "1bit-opt") {
    ev.value = one_bit_capacity(params).capacity;
  } else if (scheme == "2bit-bench" || scheme == "3bit-bench") {
    const int k = scheme[0] == '2' ? 4 : 8;
    const BenchmarkScheme bench = benchmark_pair(k, params);
    ev.value = mutual_information(bench.input, bench.quantizer, params.noise_std());
    const auto& q = bench.quantizer.thresholds();
    int idx = 1;
    for (double t : q)
      if (t > 0.0) ev.aux["q" + std::to_string(idx++)] = t;
  } else if (scheme == "2bit-opt") {
    const TwoBitOptimizeResult r = two_bit_optimize(params, opts);
    ev.value = r.best.capacity;
    ev.aux["q1"] = r.best_q;
    ev.converged = r.best.converged;
  } else if (scheme == "3bit-opt") {
    const ThreeBitOptimizeResult r =
        three_bit_optimize(params, opts, multistart_for_tables());
    ev.value = r.result.capacity;
    ev.aux["q1"] = r.quantizer.q1;
    ev.aux["q2"] = r.quantizer.q2;
    ev.aux["q3"] = r.quantizer.q3;
    ev.converged = r.result.converged;
  } else {
    throw std::invalid_argument("unknown scheme: " + scheme);
  }
  return ev;
}

double scheme_ceiling(const std::string& scheme) {
  if (scheme == "unquantized") return kInf;
  if (scheme == "1bit-opt") return 1.0;
  if (scheme == "2bit-opt" || scheme == "2bit-bench") return 2.0;
  if (scheme == "3bit-opt" || scheme == "3bit-bench") return 3.0;
  throw std::invalid_argument("unknown scheme: " + scheme);
}

std::optional<double> snr_for_rate(const std::string& scheme, double rate,
                                   std::pair<double, double> window_db,
                                   const SolverOptions& opts) {
  if (!(rate > 0.0)) throw std::invalid_argument("snr_for_rate: rate must be > 0");
  if (rate >= scheme_ceiling(scheme)) return std::nullopt;

  double lo = window_db.first;
  double hi = window_db.second;
  if (!(lo < hi)) throw std::invalid_argument("snr_for_rate: empty window");
  const double width = hi - lo;

  auto value_at = [&](double snr_db) {
    return evaluate_scheme(scheme, snr_db, opts).value;
  };

  // Widen each side once before giving up; capacity is monotone in SNR.
  if (value_at(lo) >= rate) {
    lo -= width;
    if (value_at(lo) >= rate)
      throw std::runtime_error("snr_for_rate: window does not bracket the rate");
  }
  if (value_at(hi) < rate) {
    hi += width;
    if (value_at(hi) < rate)
      throw std::runtime_error("snr_for_rate: window does not bracket the rate");
  }

  while (hi - lo > 0.01) {
    const double mid = 0.5 * (lo + hi);
    if (value_at(mid) < rate)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<TableCell> reproduce_table(int which, std::vector<double> points,
                                       const SolverOptions& opts) {
  const auto& specs = table_specs();
  const auto it = std::find_if(specs.begin(), specs.end(),
                               [&](const TableSpec& t) { return t.id == which; });
  if (it == specs.end())
    throw std::invalid_argument("reproduce_table: table id must be 1..4");
  const TableSpec& spec = *it;
  if (points.empty()) points = spec.points;

  std::vector<TableCell> cells;
  for (const TableRow& row : spec.rows) {
    for (double p : points) {
      TableCell cell;
      cell.table = which;
      cell.scheme = row.scheme;
      cell.param = p;
      cell.tolerance = row.tolerance;

      // Match the fixture column, if any.
      std::ptrdiff_t col = -1;
      for (std::size_t c = 0; c < spec.points.size(); ++c)
        if (std::abs(spec.points[c] - p) < 1e-9) col = static_cast<std::ptrdiff_t>(c);
      if (col >= 0) {
        cell.has_reference = true;
        const double ref = row.values[static_cast<std::size_t>(col)];
        cell.ref_infeasible = std::isnan(ref);
        cell.reference = cell.ref_infeasible ? 0.0 : ref;
        cell.gated = row.gated.empty() || row.gated[static_cast<std::size_t>(col)];
      } else {
        cell.gated = false;
      }

      try {
        if (which == 4) {
          const std::optional<double> snr = snr_for_rate(row.scheme, p, {-20.0, 30.0}, opts);
          cell.infeasible = !snr.has_value();
          cell.value = snr.value_or(0.0);
        } else {
          const SchemeEval ev = evaluate_scheme(row.scheme, p, opts);
          cell.value = ev.value;
          cell.converged = ev.converged;
        }
      } catch (const std::runtime_error&) {
        cell.converged = false;
      }

      if (cell.has_reference) {
        if (cell.ref_infeasible || cell.infeasible)
          cell.ok = cell.ref_infeasible == cell.infeasible;
        else
          cell.ok = cell.converged && std::abs(cell.value - cell.reference) <= cell.tolerance;
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::map<std::string, double> ratio_report(double snr_db, const SolverOptions& opts) {
  const ChannelParams params = ChannelParams::from_snr_db(snr_db);
  const double unq = awgn_capacity(params);
  std::map<std::string, double> out;
  for (const char* scheme : {"1bit-opt", "2bit-opt", "3bit-opt"})
    out[scheme] = evaluate_scheme(scheme, snr_db, opts).value / unq;
  return out;
}

std::vector<SweepRecord> capacity_sweep(const std::string& scheme,
                                        const std::vector<double>& snr_db_points,
                                        const SolverOptions& opts) {
  std::vector<SweepRecord> records;
  records.reserve(snr_db_points.size());
  for (double snr_db : snr_db_points) {
    const SchemeEval ev = evaluate_scheme(scheme, snr_db, opts);
    records.push_back({snr_db, scheme, ev.value, ev.aux});
  }
  return records;
}

}  // namespace quantcap
