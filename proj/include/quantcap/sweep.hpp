#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quantcap/channel.hpp"
#include "quantcap/solver.hpp"

namespace quantcap {

/// One (SNR, scheme) evaluation; aux carries scheme parameters such as the
/// positive thresholds q1..q3 of symmetric quantizers.
struct SweepRecord {
  double snr_db = 0.0;
  std::string scheme;
  double value = 0.0;  // bits/channel use
  std::map<std::string, double> aux;
};

/// Scheme labels accepted throughout: 1bit-opt, 2bit-opt, 2bit-bench,
/// 3bit-opt, 3bit-bench, unquantized.
const std::vector<std::string>& scheme_labels();

/// Capacity of the real AWGN channel without quantization, bits/channel use.
double awgn_capacity(const ChannelParams& params);

struct SchemeEval {
  double value = 0.0;
  std::map<std::string, double> aux;
  bool converged = true;
};

SchemeEval evaluate_scheme(const std::string& scheme, double snr_db,
                           const SolverOptions& opts = {});

/// log2 K for quantized schemes, +inf for unquantized.
double scheme_ceiling(const std::string& scheme);

/// SNR in dB at which the scheme reaches the given rate, found by bisection
/// to 0.01 dB on fresh capacity solves. Empty when the rate is at or above
/// the scheme's ceiling. The window widens once on each side before the
/// search gives up with an exception.
std::optional<double> snr_for_rate(const std::string& scheme, double rate,
                                   std::pair<double, double> window_db = {-20.0, 30.0},
                                   const SolverOptions& opts = {});

/// One reproduced table cell with its embedded reference value.
struct TableCell {
  int table = 0;
  std::string scheme;
  double param = 0.0;  // snr_db for tables 1-3, target rate for table 4
  double value = 0.0;  // bits (tables 1-3) or dB (table 4)
  bool infeasible = false;
  bool has_reference = false;
  double reference = 0.0;
  bool ref_infeasible = false;
  double tolerance = 0.0;
  bool gated = true;  // ungated cells are informational only
  bool ok = true;
  bool converged = true;
};

/// Recomputes a reference table (1-4). `points` selects the SNR columns
/// (tables 1-3) or the target rates (table 4); empty means the table's own.
std::vector<TableCell> reproduce_table(int which, std::vector<double> points = {},
                                       const SolverOptions& opts = {});

/// Fraction of the unquantized capacity achieved by each optimal quantized
/// scheme at this SNR.
std::map<std::string, double> ratio_report(double snr_db,
                                           const SolverOptions& opts = {});

/// Capacity-versus-SNR records for one scheme, ordered like the input grid.
std::vector<SweepRecord> capacity_sweep(const std::string& scheme,
                                        const std::vector<double>& snr_db_points,
                                        const SolverOptions& opts = {});

}  // namespace quantcap
