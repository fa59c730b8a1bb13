#include "quantcap/quantizer_design.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "golden.hpp"
#include "parallel.hpp"

namespace quantcap {

namespace {

constexpr double kRoundImprovementTol = 1e-5;  // bits
constexpr int kMaxRounds = 50;

double mi_for_thresholds(const InputDistribution& input, const ChannelParams& params,
                         double q1, double q2, double q3) {
  const QuantizerSpec qz({-q3, -q2, -q1, 0.0, q1, q2, q3});
  return mutual_information(input, qz, params.noise_std());
}

}  // namespace

QuantizerSpec SymmetricQuantizer2Bit::to_quantizer() const {
  if (!(q > 0.0)) throw std::invalid_argument("SymmetricQuantizer2Bit: q must be > 0");
  return QuantizerSpec({-q, 0.0, q});
}

QuantizerSpec SymmetricQuantizer3Bit::to_quantizer() const {
  if (!(0.0 < q1 && q1 < q2 && q2 < q3))
    throw std::invalid_argument("SymmetricQuantizer3Bit: need 0 < q1 < q2 < q3");
  return QuantizerSpec({-q3, -q2, -q1, 0.0, q1, q2, q3});
}

BenchmarkScheme benchmark_pair(int k, const ChannelParams& params) {
  if (k < 2 || k % 2 != 0)
    throw std::invalid_argument("benchmark_pair: k must be even and >= 2");
  if (!(params.power > 0.0))
    throw std::invalid_argument("benchmark_pair: power must be > 0");
  // Points +-(2m-1)a, m = 1..k/2; average power a^2 (k^2 - 1) / 3 = P.
  const double a = std::sqrt(3.0 * params.power / (static_cast<double>(k) * k - 1.0));
  std::vector<double> points;
  points.reserve(k);
  for (int m = k / 2; m >= 1; --m) points.push_back(-(2.0 * m - 1.0) * a);
  for (int m = 1; m <= k / 2; ++m) points.push_back((2.0 * m - 1.0) * a);

  std::vector<double> thresholds;
  thresholds.reserve(k - 1);
  for (int i = 1; i < k; ++i) thresholds.push_back(0.5 * (points[i - 1] + points[i]));

  BenchmarkScheme scheme{
      InputDistribution{std::move(points),
                        std::vector<double>(k, 1.0 / static_cast<double>(k))},
      QuantizerSpec(std::move(thresholds))};
  scheme.input.validate();
  return scheme;
}

double benchmark_mi(int k, const ChannelParams& params) {
  const BenchmarkScheme s = benchmark_pair(k, params);
  return mutual_information(s.input, s.quantizer, params.noise_std());
}

QuantizerSpec scale_quantizer(const QuantizerSpec& quantizer, double r) {
  return quantizer.scaled(r);
}

std::vector<double> default_q_grid(const ChannelParams& params) {
  const double sigma = params.noise_std();
  const double q_max = 3.0 * std::sqrt(params.power) + 3.0 * sigma;
  const double step = 0.02 * sigma;
  const int n = static_cast<int>(std::floor(q_max / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(n);
  for (int i = 1; i <= n; ++i) grid.push_back(i * step);
  return grid;
}

TwoBitSweepResult two_bit_sweep(const ChannelParams& params,
                                const std::vector<double>& q_grid,
                                const SolverOptions& opts) {
  if (q_grid.empty()) throw std::invalid_argument("two_bit_sweep: empty grid");
  for (std::size_t i = 0; i < q_grid.size(); ++i) {
    if (!(q_grid[i] > 0.0))
      throw std::invalid_argument("two_bit_sweep: q values must be > 0");
    if (i > 0 && !(q_grid[i - 1] < q_grid[i]))
      throw std::invalid_argument("two_bit_sweep: q grid must be increasing");
  }

  TwoBitSweepResult res;
  res.curve.assign(q_grid.size(), {});
  detail::parallel_for(q_grid.size(), [&](std::size_t i) {
    const double q = q_grid[i];
    const CapacityResult c =
        capacity(params, SymmetricQuantizer2Bit{q}.to_quantizer(), opts);
    res.curve[i] = {q, c.capacity, c.converged};
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < res.curve.size(); ++i)
    if (res.curve[i].capacity > res.curve[best].capacity) best = i;
  res.best_q = res.curve[best].q;
  res.best = capacity(params, SymmetricQuantizer2Bit{res.best_q}.to_quantizer(), opts);
  return res;
}

TwoBitOptimizeResult two_bit_optimize(const ChannelParams& params,
                                      const SolverOptions& opts) {
  const double sigma = params.noise_std();
  const double q_max = 3.0 * std::sqrt(params.power) + 3.0 * sigma;
  const double coarse = 0.1 * sigma;

  auto cap_at = [&](double q) {
    return capacity(params, SymmetricQuantizer2Bit{q}.to_quantizer(), opts).capacity;
  };

  double best_q = coarse;
  double best_c = cap_at(best_q);
  for (double q = 2.0 * coarse; q <= q_max + 1e-12; q += coarse) {
    const double c = cap_at(q);
    if (c > best_c) {
      best_c = c;
      best_q = q;
    }
  }
  const double lo = std::max(best_q - coarse, 1e-6 * sigma);
  const double hi = std::min(best_q + coarse, q_max);
  const double refined = detail::golden_max(cap_at, lo, hi, 1e-3 * sigma);

  TwoBitOptimizeResult res;
  res.best = capacity(params, SymmetricQuantizer2Bit{refined}.to_quantizer(), opts);
  res.best_q = refined;
  if (res.best.capacity < best_c) {  // refinement never loses to the scan
    res.best_q = best_q;
    res.best = capacity(params, SymmetricQuantizer2Bit{best_q}.to_quantizer(), opts);
  }
  return res;
}

namespace {

ThreeBitOptimizeResult alternate_from(SymmetricQuantizer3Bit q,
                                      const ChannelParams& params,
                                      const SolverOptions& opts) {
  const double sigma = params.noise_std();
  ThreeBitOptimizeResult out;
  out.quantizer = q;
  out.result = capacity(params, q.to_quantizer(), opts);

  for (int round = 1; round <= kMaxRounds; ++round) {
    out.rounds = round;
    const InputDistribution& f = out.result.distribution;

    // Cyclic coordinate improvement of the thresholds for the fixed input,
    // each within its ordering-preserving interval.
    for (int coord = 0; coord < 3; ++coord) {
      double lo, hi;
      if (coord == 0) {
        lo = 1e-9 * sigma;
        hi = q.q2;
      } else if (coord == 1) {
        lo = q.q1;
        hi = q.q3;
      } else {
        lo = q.q2;
        hi = std::max(q.q3 + 3.0 * sigma, 3.0 * std::sqrt(params.power) + 3.0 * sigma);
      }
      auto mi_at = [&](double t) {
        return mi_for_thresholds(f, params, coord == 0 ? t : q.q1,
                                 coord == 1 ? t : q.q2, coord == 2 ? t : q.q3);
      };
      const double cur = mi_at(coord == 0 ? q.q1 : coord == 1 ? q.q2 : q.q3);
      const double span = hi - lo;
      if (span <= 2e-9 * sigma) continue;
      const double t = detail::golden_max(mi_at, lo + 1e-10 * span, hi - 1e-10 * span,
                                          1e-4 * sigma);
      if (mi_at(t) >= cur) {
        (coord == 0 ? q.q1 : coord == 1 ? q.q2 : q.q3) = t;
      }
    }

    const CapacityResult next = capacity(params, q.to_quantizer(), opts);
    const double gain = next.capacity - out.result.capacity;
    if (next.capacity > out.result.capacity) {
      out.result = next;
      out.quantizer = q;
    }
    if (gain < kRoundImprovementTol) break;
  }
  return out;
}

}  // namespace

ThreeBitOptimizeResult three_bit_optimize(const ChannelParams& params,
                                          const SolverOptions& opts, int multistart) {
  if (multistart < 1)
    throw std::invalid_argument("three_bit_optimize: multistart must be >= 1");
  const double sigma = params.noise_std();
  const double a = std::sqrt(params.power / 21.0);  // 8-PAM benchmark spacing / 2

  std::vector<SymmetricQuantizer3Bit> starts;
  starts.push_back({2.0 * a, 4.0 * a, 6.0 * a});
  starts.push_back({sigma, 2.0 * sigma, 3.0 * sigma});
  starts.push_back({a, 2.0 * a, 3.0 * a});
  starts.push_back({3.0 * a, 6.0 * a, 9.0 * a});
  const int n = std::min<int>(multistart, static_cast<int>(starts.size()));

  ThreeBitOptimizeResult best;
  for (int i = 0; i < n; ++i) {
    ThreeBitOptimizeResult r = alternate_from(starts[i], params, opts);
    if (i == 0 || r.result.capacity > best.result.capacity) best = std::move(r);
  }
  return best;
}

}  // namespace quantcap
