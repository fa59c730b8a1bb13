#pragma once

#include <vector>

#include "quantcap/channel.hpp"

namespace quantcap {

/// Tolerance and grid knobs for the capacity solver.
struct SolverOptions {
  double grid_half_width = 0.0;  ///< candidate-support extent, in units of sigma; <= 0 selects automatic sizing
  double grid_step = 0.01;       ///< candidate grid spacing, in units of sigma
  double kkt_tol = 1e-6;         ///< certification tolerance, bits
  double power_tol = 1e-8;       ///< power slack, relative to P
  int max_outer_iters = 200;     ///< support-refinement iterations
  double prune_prob = 1e-7;      ///< mass points below this probability are dropped

  // Fixed-point plumbing.
  double inner_tol = 1e-10;        ///< sup-norm stopping for the multiplicative update
  int max_inner_iters = 200000;
  bool check_inner_monotone = false;  ///< assert the Lagrangian never decreases (debug)

  void validate() const;
};

/// Certified capacity computation output.
struct CapacityResult {
  double capacity = 0.0;  ///< bits/channel use
  InputDistribution distribution;
  double gamma = 0.0;      ///< Lagrange multiplier on average power
  double kkt_slack = 0.0;  ///< max over the candidate grid of d(x;F) + gamma(P - x^2) - I(F)
  double power_used = 0.0;
  int outer_iters = 0;
  bool converged = false;
};

/// Numerical support bound for the current solver iterate.
struct SupportBound {
  double lower;             ///< A1*
  double upper;             ///< A2*
  double saturation_level;  ///< L = -log2 R(y_K;F)
  double onset;             ///< A0: past here d(x;F) stays below L up to saturation
  bool saturated = true;    ///< false when no saturation was detected after widening once
};

struct FixedPointResult {
  InputDistribution distribution;
  bool converged = false;
  int iterations = 0;
};

/// Closed-form 1-bit capacity: C = 1 - H_b(Q(sqrt(SNR))) with equiprobable
/// antipodal inputs at +-sqrt(P), for the single-threshold-at-zero quantizer.
CapacityResult one_bit_capacity(const ChannelParams& params);

/// Power-penalized multiplicative fixed point on a fixed support:
/// p <- p * exp2(d(x;F) - gamma x^2) / normalizer, iterated until the
/// sup-norm change drops below inner_tol or the iteration cap is reached.
FixedPointResult constrained_fixed_point(const std::vector<double>& points,
                                         const ChannelParams& params,
                                         const QuantizerSpec& quantizer,
                                         double gamma,
                                         const SolverOptions& opts = {});

/// Capacity of the quantized-output channel for a fixed quantizer:
/// cutting-plane support refinement around the constrained fixed point,
/// certified by the KKT condition on a dense candidate grid.
CapacityResult capacity(const ChannelParams& params, const QuantizerSpec& quantizer,
                        const SolverOptions& opts = {});

/// Max over `grid` of d(x;F) + gamma (P - x^2) - I(F) for the result's
/// distribution. When that max certifies optimality (<= kkt_tol) the slack at
/// every mass point must also vanish within support_tol; a violation there
/// throws, since it means the claimed certificate is inconsistent.
double kkt_certify(const CapacityResult& result, const ChannelParams& params,
                   const QuantizerSpec& quantizer, const std::vector<double>& grid,
                   double kkt_tol = 1e-6, double support_tol = 1e-5);

/// Max over the mass points of |d(x;F) + gamma (P - x^2) - I(F)|.
double kkt_support_deviation(const CapacityResult& result, const ChannelParams& params,
                             const QuantizerSpec& quantizer);

/// Bounded-support interval [A1*, A2*] outside which the KKT equality cannot
/// hold for the given iterate, from the divergence saturation level and onset.
SupportBound support_bound(const InputDistribution& input, const ChannelParams& params,
                           const QuantizerSpec& quantizer, double gamma);

/// The solver's default candidate grid for these parameters (step grid_step
/// * sigma, symmetric about zero).
std::vector<double> candidate_grid(const ChannelParams& params,
                                   const QuantizerSpec& quantizer,
                                   const SolverOptions& opts = {});

}  // namespace quantcap
