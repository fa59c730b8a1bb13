// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "quantcap/channel.hpp"
#include "quantcap/quantizer_design.hpp"
#include "quantcap/solver.hpp"
#include "quantcap/sweep.hpp"

using namespace quantcap;

namespace {

struct Harness {
  int failures = 0;

  void report(const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << ": " << detail << std::endl;
    if (!pass) ++failures;
  }
};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct SavedSolve {
  ChannelParams params;
  QuantizerSpec quantizer;
  CapacityResult result;
  std::string label;
};

}  // namespace

int main() {
  Harness h;
  std::vector<SavedSolve> solves;

  // 1. 1-bit closed form against the reference rows.
  {
    const QuantizerSpec q1({0.0});
    const std::vector<std::pair<double, double>> cells = {
        {-10.0, 0.0449}, {-5.0, 0.1353}, {0.0, 0.3689}, {7.0, 0.9020},  // table 1
        {-5.0, 0.1353},  {0.0, 0.3689},  {5.0, 0.7684}, {10.0, 0.9908},  // table 3
    };
    double max_err = 0.0;
    bool all_converged = true;
    for (const auto& [db, ref] : cells) {
      const ChannelParams params = ChannelParams::from_snr_db(db);
      const CapacityResult r = one_bit_capacity(params);
      max_err = std::max(max_err, std::abs(r.capacity - ref));
      all_converged = all_converged && r.converged;
      solves.push_back({params, q1, r, "1bit@" + num(db) + "dB"});
    }
    h.report("criterion 1 (1-bit closed form)", all_converged && max_err <= 0.001,
             "max |error| = " + num(max_err) + " over 8 cells (tol 0.001)");
  }

  // 2. 2-bit threshold sweep against the reference row.
  std::vector<double> best_qs;
  {
    const std::vector<std::pair<double, double>> cells = {{-10.0, 0.0613},
                                                          {-5.0, 0.1792},
                                                          {0.0, 0.4552},
                                                          {7.0, 1.0981},
                                                          {15.0, 1.9304}};
    double max_err = 0.0, max_secs = 0.0;
    bool ok = true;
    for (const auto& [db, ref] : cells) {
      const auto t0 = std::chrono::steady_clock::now();
      const ChannelParams params = ChannelParams::from_snr_db(db);
      const TwoBitSweepResult sweep = two_bit_sweep(params, default_q_grid(params));
      max_secs = std::max(max_secs, seconds_since(t0));
      max_err = std::max(max_err, std::abs(sweep.best.capacity - ref));
      ok = ok && sweep.best.converged;
      ok = ok && sweep.best.capacity >= one_bit_capacity(params).capacity - 1e-6;
      ok = ok && sweep.best.capacity >= benchmark_mi(4, params) - 1e-6;
      best_qs.push_back(sweep.best_q);
      solves.push_back({params, SymmetricQuantizer2Bit{sweep.best_q}.to_quantizer(),
                        sweep.best, "2bit@" + num(db) + "dB"});
    }
    ok = ok && best_qs[4] >= best_qs[3];  // optimal q nondecreasing at high SNR
    h.report("criterion 2 (2-bit sweep)", ok && max_err <= 0.005 && max_secs <= 120.0,
             "max |error| = " + num(max_err) + " (tol 0.005), slowest point " +
                 num(max_secs) + " s (budget 120 s)");
  }

  // 3. Benchmark scheme mutual information, both reference rows.
  {
    const std::vector<std::pair<double, double>> two_bit = {{-10.0, 0.0527},
                                                            {-5.0, 0.1658},
                                                            {0.0, 0.4401},
                                                            {7.0, 1.0639},
                                                            {15.0, 1.9211}};
    const std::vector<std::pair<double, double>> three_bit = {{-10.0, 0.0557},
                                                              {0.0, 0.4707},
                                                              {5.0, 0.9547},
                                                              {10.0, 1.5332},
                                                              {20.0, 2.8084}};
    double max_err = 0.0;
    for (const auto& [db, ref] : two_bit)
      max_err = std::max(
          max_err, std::abs(benchmark_mi(4, ChannelParams::from_snr_db(db)) - ref));
    for (const auto& [db, ref] : three_bit)
      max_err = std::max(
          max_err, std::abs(benchmark_mi(8, ChannelParams::from_snr_db(db)) - ref));
    h.report("criterion 3 (benchmark scheme)", max_err <= 0.001,
             "max |error| = " + num(max_err) + " over 10 cells (tol 0.001)");
  }

  // 4. 3-bit alternating optimization against the reference row.
  {
    const std::vector<std::pair<double, double>> cells = {{-10.0, 0.0667},
                                                          {0.0, 0.4817},
                                                          {5.0, 0.9753},
                                                          {10.0, 1.5844},
                                                          {20.0, 2.8367}};
    double max_err = 0.0, max_secs = 0.0;
    bool ok = true;
    for (const auto& [db, ref] : cells) {
      const auto t0 = std::chrono::steady_clock::now();
      const ChannelParams params = ChannelParams::from_snr_db(db);
      const ThreeBitOptimizeResult opt = three_bit_optimize(params, {}, 3);
      max_secs = std::max(max_secs, seconds_since(t0));
      max_err = std::max(max_err, std::abs(opt.result.capacity - ref));
      ok = ok && opt.result.converged;
      ok = ok && opt.result.capacity >= benchmark_mi(8, params) - 1e-6;
      solves.push_back({params, opt.quantizer.to_quantizer(), opt.result,
                        "3bit@" + num(db) + "dB"});
    }
    h.report("criterion 4 (3-bit optimization)",
             ok && max_err <= 0.01 && max_secs <= 600.0,
             "max |error| = " + num(max_err) + " (tol 0.01), slowest point " +
                 num(max_secs) + " s (budget 600 s)");
  }

  // 5. Cross-precision table with the dominance chain.
  {
    const std::vector<TableCell> cells = reproduce_table(3);
    bool all_ok = true;
    double max_rel = 0.0;
    for (const TableCell& c : cells) {
      all_ok = all_ok && c.ok;
      if (c.has_reference)
        max_rel = std::max(max_rel, std::abs(c.value - c.reference));
    }
    bool chain = true;
    for (double db : {-5.0, 0.0, 5.0, 10.0, 15.0}) {
      double v1 = 0, v2 = 0, v3 = 0, vu = 0;
      for (const TableCell& c : cells) {
        if (std::abs(c.param - db) > 1e-9) continue;
        if (c.scheme == "1bit-opt") v1 = c.value;
        if (c.scheme == "2bit-opt") v2 = c.value;
        if (c.scheme == "3bit-opt") v3 = c.value;
        if (c.scheme == "unquantized") vu = c.value;
      }
      chain = chain && v1 <= v2 + 1e-9 && v2 <= v3 + 1e-9 && v3 <= vu + 1e-9;
    }
    h.report("criterion 5 (cross-precision table)", all_ok && chain,
             std::string("20/20 cells within tolerance: ") +
                 (all_ok ? "yes" : "no") + ", dominance chain: " +
                 (chain ? "holds" : "violated") + ", max |error| = " + num(max_rel));
  }

  // 6. SNR required for a target rate, including infeasible markers.
  {
    struct RateRow {
      const char* scheme;
      double tol;
      std::vector<std::pair<double, double>> cells;  // rate -> dB
      std::vector<double> infeasible;
    };
    const std::vector<RateRow> rows = {
        {"unquantized",
         0.02,
         {{0.25, -3.83}, {0.5, 0.00}, {1.0, 4.77}, {1.73, 10.00}, {2.5, 14.91}},
         {}},
        {"2bit-opt", 0.15, {{0.25, -3.32}, {0.5, 0.59}, {1.0, 6.13}, {1.73, 12.30}},
         {2.5}},
        {"3bit-opt",
         0.30,
         {{0.25, -3.67}, {0.5, 0.23}, {1.0, 5.19}, {1.73, 11.04}, {2.5, 16.90}},
         {}},
        {"1bit-opt", 0.05, {}, {1.0, 1.73, 2.5}},
    };
    bool ok = true;
    double worst = 0.0;
    std::string worst_at = "-";
    for (const RateRow& row : rows) {
      for (const auto& [rate, ref] : row.cells) {
        const auto snr = snr_for_rate(row.scheme, rate);
        if (!snr.has_value()) {
          ok = false;
          continue;
        }
        const double err = std::abs(*snr - ref);
        if (err / row.tol > worst) {
          worst = err / row.tol;
          worst_at = std::string(row.scheme) + "@" + num(rate);
        }
        ok = ok && err <= row.tol;
      }
      for (double rate : row.infeasible)
        ok = ok && !snr_for_rate(row.scheme, rate).has_value();
    }
    h.report("criterion 6 (rate inversion)", ok,
             "worst cell " + worst_at + " at " + num(worst * 100.0) +
                 "% of its tolerance; infeasible cells match");
  }

  // 7. KKT certification of every converged solve from criteria 1, 2 and 4.
  {
    bool ok = true;
    double max_slack = -1e300, max_dev = 0.0;
    for (const SavedSolve& s : solves) {
      if (!s.result.converged) {
        ok = false;
        continue;
      }
      const double sigma = s.params.noise_std();
      const SupportBound bound =
          support_bound(s.result.distribution, s.params, s.quantizer, s.result.gamma);
      std::vector<double> grid;
      for (double x = bound.lower; x <= bound.upper + 1e-12; x += 0.01 * sigma)
        grid.push_back(x);
      double slack;
      try {
        slack = kkt_certify(s.result, s.params, s.quantizer, grid, 1e-6, 1e-5);
      } catch (const std::exception& e) {
        ok = false;
        std::cout << "  certificate inconsistent for " << s.label << ": " << e.what()
                  << std::endl;
        continue;
      }
      const double dev = kkt_support_deviation(s.result, s.params, s.quantizer);
      max_slack = std::max(max_slack, slack);
      max_dev = std::max(max_dev, dev);
      ok = ok && slack <= 1e-6 && dev <= 1e-5;
      ok = ok && static_cast<int>(s.result.distribution.points.size()) <=
                     s.quantizer.bins() + 1;
      ok = ok && s.result.power_used <= s.params.power * (1.0 + 1e-8);
    }
    h.report("criterion 7 (KKT certification)", ok,
             std::to_string(solves.size()) + " solves; max grid slack " +
                 num(max_slack) + " (tol 1e-6), max support deviation " + num(max_dev) +
                 " (tol 1e-5), support <= K+1, power within budget");
  }

  // 8. Scale invariance over random (SNR, quantizer) pairs.
  {
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> snr_dist(-10.0, 15.0);
    std::uniform_int_distribution<int> k_dist(2, 5);
    std::uniform_real_distribution<double> t_dist(-3.0, 3.0);
    double max_diff = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const double db = snr_dist(rng);
      const int k = k_dist(rng);
      std::vector<double> q(k - 1);
      for (;;) {
        for (double& v : q) v = t_dist(rng);
        std::sort(q.begin(), q.end());
        bool spaced = true;
        for (std::size_t i = 1; i < q.size(); ++i)
          if (q[i] - q[i - 1] < 0.05) spaced = false;
        if (spaced) break;
      }
      const ChannelParams params = ChannelParams::from_snr_db(db);
      const QuantizerSpec quant(q);
      const double c0 = capacity(params, quant).capacity;
      for (double r : {0.25, 4.0}) {
        const ChannelParams scaled(r * params.power, r * params.noise_var);
        const double cr = capacity(scaled, scale_quantizer(quant, r)).capacity;
        max_diff = std::max(max_diff, std::abs(cr - c0));
      }
    }
    h.report("criterion 8 (scale invariance)", max_diff < 2e-4,
             "max |capacity change| = " + num(max_diff) +
                 " over 20 pairs x R in {0.25, 4} (tol 2e-4)");
  }

  // 9. K = 2 solver against the analytic antipodal-signaling formula.
  {
    double max_err = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double db = -10.0 + 30.0 * i / 19.0;
      const ChannelParams params = ChannelParams::from_snr_db(db);
      // Independent closed form: binary symmetric channel with crossover
      // Q(sqrt(SNR)).
      const double eps = 0.5 * std::erfc(std::sqrt(params.snr() / 2.0));
      double href = 0.0;
      if (eps > 0.0) href -= eps * std::log2(eps);
      if (eps < 1.0) href -= (1.0 - eps) * std::log2(1.0 - eps);
      const double ref = 1.0 - href;
      const CapacityResult r = capacity(params, QuantizerSpec({0.0}));
      max_err = std::max(max_err, std::abs(r.capacity - ref));
    }
    h.report("criterion 9 (oracle equivalence, K=2)", max_err <= 1e-4,
             "max |error| = " + num(max_err) + " over 20 SNR points (tol 1e-4)");
  }

  if (h.failures == 0)
    std::cout << "all acceptance criteria passed" << std::endl;
  else
    std::cout << h.failures << " acceptance criteria failed" << std::endl;
  return h.failures == 0 ? 0 : 1;
}
