#include "quantcap/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace quantcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Probabilities below this are treated as exactly zero; contributions at that
// level sit far below every reported tolerance.
constexpr double kProbFloor = 1e-300;

}  // namespace

ChannelParams::ChannelParams(double power_, double noise_var_)
    : power(power_), noise_var(noise_var_) {
  if (!(power >= 0.0) || !std::isfinite(power))
    throw std::invalid_argument("ChannelParams: power must be >= 0");
  if (!(noise_var > 0.0) || !std::isfinite(noise_var))
    throw std::invalid_argument("ChannelParams: noise_var must be > 0");
}

double ChannelParams::snr_db() const { return linear_to_db(snr()); }

double ChannelParams::noise_std() const { return std::sqrt(noise_var); }

ChannelParams ChannelParams::from_snr_db(double snr_db, double noise_var) {
  return ChannelParams(db_to_linear(snr_db) * noise_var, noise_var);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

QuantizerSpec::QuantizerSpec(std::vector<double> thresholds)
    : thresholds_(std::move(thresholds)) {
  if (thresholds_.empty())
    throw std::invalid_argument("QuantizerSpec: at least one threshold required");
  for (std::size_t i = 0; i < thresholds_.size(); ++i) {
    if (!std::isfinite(thresholds_[i]))
      throw std::invalid_argument("QuantizerSpec: thresholds must be finite");
    if (i > 0 && !(thresholds_[i - 1] < thresholds_[i]))
      throw std::invalid_argument(
          "QuantizerSpec: thresholds must be strictly increasing");
  }
}

QuantizerSpec QuantizerSpec::scaled(double r) const {
  if (!(r > 0.0))
    throw std::invalid_argument("QuantizerSpec::scaled: r must be > 0");
  const double s = std::sqrt(r);
  std::vector<double> q(thresholds_);
  for (double& v : q) v *= s;
  return QuantizerSpec(std::move(q));
}

void InputDistribution::validate() const {
  if (points.size() != probs.size())
    throw std::invalid_argument("InputDistribution: points/probs length mismatch");
  if (points.empty())
    throw std::invalid_argument("InputDistribution: empty support");
  double sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i]))
      throw std::invalid_argument("InputDistribution: non-finite mass point");
    if (i > 0 && !(points[i - 1] < points[i]))
      throw std::invalid_argument(
          "InputDistribution: points must be strictly increasing");
    if (!(probs[i] >= 0.0 && probs[i] <= 1.0))
      throw std::invalid_argument("InputDistribution: probs must lie in [0,1]");
    sum += probs[i];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("InputDistribution: probs must sum to 1");
}

double InputDistribution::avg_power() const {
  double s = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) s += probs[i] * points[i] * points[i];
  return s;
}

double InputDistribution::entropy_bits() const { return detail::entropy_bits(probs); }

double qfunc(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double gauss_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

namespace detail {

double gauss_interval(double a, double b) {
  const bool lo_open = std::isinf(a) && a < 0.0;
  const bool hi_open = std::isinf(b) && b > 0.0;
  if (lo_open && hi_open) return 1.0;
  if (lo_open) return qfunc(-b);
  if (hi_open) return qfunc(a);
  // Q(a) - Q(b); mirror so the subtracted tails are the small ones.
  const double p = (a + b >= 0.0) ? qfunc(a) - qfunc(b) : qfunc(-b) - qfunc(-a);
  return std::max(p, 0.0);
}

double divergence_bits(const std::vector<double>& w, const std::vector<double>& r) {
  double d = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0.0) continue;
    if (r[i] <= 0.0) return kInf;
    d += w[i] * std::log2(w[i] / r[i]);
  }
  return d;
}

double entropy_bits(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

}  // namespace detail

std::vector<double> transition_row(double x, const QuantizerSpec& quantizer,
                                   double noise_std) {
  if (!(noise_std > 0.0))
    throw std::invalid_argument("transition_row: noise_std must be > 0");
  const auto& q = quantizer.thresholds();
  const int k = quantizer.bins();
  std::vector<double> row(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const double a = (i == 0) ? -kInf : (q[i - 1] - x) / noise_std;
    const double b = (i == k - 1) ? kInf : (q[i] - x) / noise_std;
    double p = detail::gauss_interval(a, b);
    if (p < kProbFloor) p = 0.0;
    row[i] = p;
  }
  return row;
}

TransitionMatrix transition_matrix(const InputDistribution& input,
                                   const QuantizerSpec& quantizer,
                                   double noise_std) {
  TransitionMatrix w;
  w.rows.reserve(input.points.size());
  for (double x : input.points) w.rows.push_back(transition_row(x, quantizer, noise_std));
  return w;
}

OutputPmf output_pmf(const InputDistribution& input, const TransitionMatrix& w) {
  if (w.rows.size() != input.probs.size())
    throw std::invalid_argument("output_pmf: transition row count mismatch");
  if (w.rows.empty()) throw std::invalid_argument("output_pmf: empty input");
  OutputPmf r;
  r.probs.assign(w.rows.front().size(), 0.0);
  for (std::size_t j = 0; j < w.rows.size(); ++j) {
    const double p = input.probs[j];
    if (p <= 0.0) continue;
    for (std::size_t i = 0; i < r.probs.size(); ++i) r.probs[i] += p * w.rows[j][i];
  }
  return r;
}

double mutual_information(const InputDistribution& input,
                          const QuantizerSpec& quantizer, double noise_std) {
  input.validate();
  const TransitionMatrix w = transition_matrix(input, quantizer, noise_std);
  const OutputPmf r = output_pmf(input, w);
  double mi = 0.0;
  for (std::size_t j = 0; j < input.probs.size(); ++j) {
    if (input.probs[j] <= 0.0) continue;
    mi += input.probs[j] * detail::divergence_bits(w.rows[j], r.probs);
  }
  return mi;
}

double divergence(double x, const InputDistribution& input,
                  const QuantizerSpec& quantizer, double noise_std) {
  input.validate();
  const OutputPmf r = output_pmf(input, transition_matrix(input, quantizer, noise_std));
  return detail::divergence_bits(transition_row(x, quantizer, noise_std), r.probs);
}

double binary_entropy_bits(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("binary_entropy_bits: p must lie in [0,1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

}  // namespace quantcap
