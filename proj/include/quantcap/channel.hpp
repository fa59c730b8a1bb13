#pragma once

#include <vector>

namespace quantcap {

/// Real AWGN channel with an average power constraint, linear units throughout.
struct ChannelParams {
  double power;      ///< average power constraint P
  double noise_var;  ///< noise variance sigma^2

  ChannelParams(double power_, double noise_var_);

  double snr() const { return power / noise_var; }
  double snr_db() const;
  double noise_std() const;

  /// P = 10^(snr_db/10) * noise_var.
  static ChannelParams from_snr_db(double snr_db, double noise_var = 1.0);
};

double db_to_linear(double db);
double linear_to_db(double linear);

/// K-bin scalar quantizer given by its K-1 strictly increasing thresholds.
/// The outermost bins extend to -inf and +inf; those sentinels are implicit.
class QuantizerSpec {
 public:
  explicit QuantizerSpec(std::vector<double> thresholds);

  int bins() const { return static_cast<int>(thresholds_.size()) + 1; }
  const std::vector<double>& thresholds() const { return thresholds_; }

  /// Equivalent quantizer for a channel whose power and noise variance are
  /// both scaled by r: thresholds scaled by sqrt(r).
  QuantizerSpec scaled(double r) const;

 private:
  std::vector<double> thresholds_;
};

/// Discrete input distribution: mass-point locations with probabilities.
struct InputDistribution {
  std::vector<double> points;
  std::vector<double> probs;

  /// Throws std::invalid_argument unless points are strictly increasing,
  /// probs lie in [0,1] and sum to 1 within 1e-12.
  void validate() const;

  double avg_power() const;
  double entropy_bits() const;
};

/// Transition probabilities, one row per input mass point, K columns.
struct TransitionMatrix {
  std::vector<std::vector<double>> rows;
};

/// PMF of the quantized output, K entries.
struct OutputPmf {
  std::vector<double> probs;
};

/// Complementary Gaussian distribution function Q(x) = P(Z > x), Z ~ N(0,1).
double qfunc(double x);

/// Standard normal density.
double gauss_pdf(double x);

/// Row of transition probabilities P(Y = y_i | X = x) for each of the K bins.
std::vector<double> transition_row(double x, const QuantizerSpec& quantizer,
                                   double noise_std);

TransitionMatrix transition_matrix(const InputDistribution& input,
                                   const QuantizerSpec& quantizer,
                                   double noise_std);

/// Output PMF R(y_i) = sum_j p_j W_i(x_j). Throws on row-count mismatch.
OutputPmf output_pmf(const InputDistribution& input, const TransitionMatrix& w);

/// I(X;Y) in bits per channel use. Terms with W_i(x_j) = 0 contribute zero.
double mutual_information(const InputDistribution& input,
                          const QuantizerSpec& quantizer, double noise_std);

/// KL divergence d(x;F) between the transition PMF at x and the output PMF
/// under F, in bits. Returns +inf when F leaves a bin with W_i(x) > 0
/// unreachable (R(y_i;F) = 0).
double divergence(double x, const InputDistribution& input,
                  const QuantizerSpec& quantizer, double noise_std);

/// Binary entropy in bits; H_b(0) = H_b(1) = 0.
double binary_entropy_bits(double p);

namespace detail {

/// P(a < Z <= b) for standard normal Z, with -inf/+inf sentinels allowed.
/// Evaluated from the tail with smaller-magnitude Q values so adjacent-bin
/// differences do not cancel catastrophically.
double gauss_interval(double a, double b);

/// sum_i w_i log2(w_i / r_i) with the 0 log 0 := 0 convention; +inf when
/// some w_i > 0 meets r_i = 0.
double divergence_bits(const std::vector<double>& w, const std::vector<double>& r);

double entropy_bits(const std::vector<double>& probs);

}  // namespace detail

}  // namespace quantcap
