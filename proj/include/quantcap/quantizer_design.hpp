#pragma once

#include <vector>

#include "quantcap/channel.hpp"
#include "quantcap/solver.hpp"

namespace quantcap {

/// Symmetric 4-bin quantizer with thresholds {-q, 0, q}.
struct SymmetricQuantizer2Bit {
  double q;
  QuantizerSpec to_quantizer() const;
};

/// Symmetric 8-bin quantizer with thresholds {-q3, -q2, -q1, 0, q1, q2, q3}.
struct SymmetricQuantizer3Bit {
  double q1;
  double q2;
  double q3;
  QuantizerSpec to_quantizer() const;
};

/// Equispaced uniform K-PAM input at average power P with maximum-likelihood
/// hard-decision thresholds (midpoints of adjacent constellation points).
struct BenchmarkScheme {
  InputDistribution input;
  QuantizerSpec quantizer;
};

/// Throws on odd or sub-2 k.
BenchmarkScheme benchmark_pair(int k, const ChannelParams& params);

/// Mutual information of the benchmark scheme, bits/channel use.
double benchmark_mi(int k, const ChannelParams& params);

/// Thresholds scaled by sqrt(r): the equivalent quantizer after power and
/// noise variance are both scaled by r.
QuantizerSpec scale_quantizer(const QuantizerSpec& quantizer, double r);

struct QSweepPoint {
  double q;
  double capacity;
  bool converged;
};

struct TwoBitSweepResult {
  std::vector<QSweepPoint> curve;
  double best_q = 0.0;
  CapacityResult best;
};

/// 0.02 sigma steps over (0, 3 sqrt(P) + 3 sigma].
std::vector<double> default_q_grid(const ChannelParams& params);

/// Brute-force capacity over thresholds {-q, 0, q} for each q in the grid.
/// Returns the full curve plus the argmax re-solved as a CapacityResult.
TwoBitSweepResult two_bit_sweep(const ChannelParams& params,
                                const std::vector<double>& q_grid,
                                const SolverOptions& opts = {});

struct TwoBitOptimizeResult {
  double best_q = 0.0;
  CapacityResult best;
};

/// Coarse scan plus golden-section refinement of the 2-bit threshold; same
/// optimum as two_bit_sweep at a fraction of the solves.
TwoBitOptimizeResult two_bit_optimize(const ChannelParams& params,
                                      const SolverOptions& opts = {});

struct ThreeBitOptimizeResult {
  SymmetricQuantizer3Bit quantizer{0.0, 0.0, 0.0};
  CapacityResult result;
  int rounds = 0;
  /// Alternating optimization certifies the input for the final thresholds
  /// but cannot guarantee a globally optimal quantizer.
  bool local_optimum_caveat = true;
};

/// Alternates capacity solves with cyclic golden-section threshold
/// improvement, starting from the 8-PAM benchmark thresholds. `multistart`
/// adds deterministic alternative starting points (scaled benchmark and
/// noise-scale thresholds) and keeps the best outcome.
ThreeBitOptimizeResult three_bit_optimize(const ChannelParams& params,
                                          const SolverOptions& opts = {},
                                          int multistart = 1);

}  // namespace quantcap
