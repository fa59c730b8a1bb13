#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "quantcap/channel.hpp"

using namespace quantcap;

namespace {

QuantizerSpec random_quantizer(std::mt19937& rng) {
  std::uniform_int_distribution<int> kdist(2, 8);
  std::uniform_real_distribution<double> tdist(-10.0, 10.0);
  const int k = kdist(rng);
  for (;;) {
    std::vector<double> q(k - 1);
    for (double& v : q) v = tdist(rng);
    std::sort(q.begin(), q.end());
    bool ok = true;
    for (std::size_t i = 1; i < q.size(); ++i)
      if (q[i] - q[i - 1] < 1e-6) ok = false;
    if (ok) return QuantizerSpec(q);
  }
}

InputDistribution random_input(std::mt19937& rng, int max_points = 5) {
  std::uniform_int_distribution<int> mdist(1, max_points);
  std::uniform_real_distribution<double> xdist(-5.0, 5.0);
  std::uniform_real_distribution<double> pdist(0.05, 1.0);
  const int m = mdist(rng);
  for (;;) {
    std::vector<double> x(m);
    for (double& v : x) v = xdist(rng);
    std::sort(x.begin(), x.end());
    bool ok = true;
    for (int i = 1; i < m; ++i)
      if (x[i] - x[i - 1] < 1e-6) ok = false;
    if (!ok) continue;
    std::vector<double> p(m);
    double sum = 0.0;
    for (double& v : p) sum += (v = pdist(rng));
    for (double& v : p) v /= sum;
    return InputDistribution{std::move(x), std::move(p)};
  }
}

}  // namespace

TEST_CASE("channel params") {
  const ChannelParams p(2.0, 0.5);
  CHECK(p.snr() == doctest::Approx(4.0));
  CHECK(p.snr_db() == doctest::Approx(6.0206).epsilon(1e-4));
  CHECK(ChannelParams::from_snr_db(0.0).power == doctest::Approx(1.0));
  CHECK(ChannelParams::from_snr_db(10.0, 2.0).power == doctest::Approx(20.0));
  CHECK_THROWS_AS(ChannelParams(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ChannelParams(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("quantizer spec validation") {
  const QuantizerSpec q({-1.0, 0.0, 1.0});
  CHECK(q.bins() == 4);
  CHECK_THROWS_AS(QuantizerSpec({1.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(QuantizerSpec({0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(QuantizerSpec({}), std::invalid_argument);
  const QuantizerSpec s = q.scaled(4.0);
  CHECK(s.thresholds()[0] == doctest::Approx(-2.0));
  CHECK(s.thresholds()[2] == doctest::Approx(2.0));
}

TEST_CASE("qfunc against the quadrature oracle") {
  CHECK(qfunc(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(qfunc(-1.0) == doctest::Approx(1.0 - qfunc(1.0)).epsilon(1e-15));
  for (double x : {-8.0, -4.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 4.0, 6.0, 8.0}) {
    const double ref = static_cast<double>(oracle::qfunc_quadrature(x));
    CHECK(std::abs(qfunc(x) - ref) <= 1e-12 * ref);
  }
  // Frozen oracle value for the reference point used across the suite.
  CHECK(qfunc(1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-12));
}

TEST_CASE("qfunc monotone and saturating") {
  double prev = 1.0;
  for (double x = -40.0; x <= 40.0; x += 0.25) {
    const double v = qfunc(x);
    CHECK(v <= prev);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
  CHECK(qfunc(40.0) == 0.0);
  CHECK(qfunc(-40.0) == 1.0);
}

TEST_CASE("transition_row examples") {
  const auto r1 = transition_row(0.0, QuantizerSpec({0.0}), 1.0);
  CHECK(r1[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r1[1] == doctest::Approx(0.5).epsilon(1e-14));

  const auto r2 = transition_row(0.0, QuantizerSpec({-1.0, 1.0}), 1.0);
  CHECK(r2[0] == doctest::Approx(0.158655).epsilon(1e-5));
  CHECK(r2[1] == doctest::Approx(0.682689).epsilon(1e-5));
  CHECK(r2[2] == doctest::Approx(0.158655).epsilon(1e-5));
  CHECK(std::abs(r2[0] + r2[1] + r2[2] - 1.0) <= 1e-12);

  const auto r3 = transition_row(1.0, QuantizerSpec({0.0}), 1.0);
  CHECK(r3[0] == doctest::Approx(0.158655).epsilon(1e-5));
  CHECK(r3[1] == doctest::Approx(0.841345).epsilon(1e-5));

  CHECK_THROWS_AS(transition_row(0.0, QuantizerSpec({0.0}), 0.0),
                  std::invalid_argument);
}

TEST_CASE("transition rows sum to one over random quantizers") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> xdist(-100.0, 100.0);
  for (int trial = 0; trial < 200; ++trial) {
    const QuantizerSpec q = random_quantizer(rng);
    const double sigma = trial % 2 ? 1.0 : 0.5;
    const double x = xdist(rng);
    const auto row = transition_row(x, q, sigma);
    double sum = 0.0;
    for (double v : row) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("output_pmf") {
  const QuantizerSpec q({0.0});
  InputDistribution single{{0.0}, {1.0}};
  auto r = output_pmf(single, transition_matrix(single, q, 1.0));
  CHECK(r.probs[0] == doctest::Approx(0.5).epsilon(1e-14));

  InputDistribution pm1{{-1.0, 1.0}, {0.5, 0.5}};
  r = output_pmf(pm1, transition_matrix(pm1, q, 1.0));
  CHECK(r.probs[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.probs[1] == doctest::Approx(0.5).epsilon(1e-14));

  InputDistribution degenerate{{-1.0, 1.0}, {1.0, 0.0}};
  r = output_pmf(degenerate, transition_matrix(degenerate, q, 1.0));
  CHECK(r.probs[0] == doctest::Approx(0.841345).epsilon(1e-5));
  CHECK(r.probs[1] == doctest::Approx(0.158655).epsilon(1e-5));

  TransitionMatrix w;
  w.rows = {{0.5, 0.5}};
  CHECK_THROWS_AS(output_pmf(pm1, w), std::invalid_argument);
}

TEST_CASE("mutual information reference values") {
  // Equiprobable antipodal input through the symmetric 1-bit quantizer.
  InputDistribution pm{{-1.0, 1.0}, {0.5, 0.5}};
  CHECK(mutual_information(pm, QuantizerSpec({0.0}), 1.0) ==
        doctest::Approx(0.3689).epsilon(3e-4));

  const double a7 = std::sqrt(std::pow(10.0, 0.7));
  InputDistribution pm7{{-a7, a7}, {0.5, 0.5}};
  CHECK(mutual_information(pm7, QuantizerSpec({0.0}), 1.0) ==
        doctest::Approx(0.9020).epsilon(3e-4));

  InputDistribution point{{0.3}, {1.0}};
  CHECK(mutual_information(point, QuantizerSpec({-1.0, 0.0, 1.0}), 1.0) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mutual information symmetry and bounds") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const QuantizerSpec q = random_quantizer(rng);
    const InputDistribution f = random_input(rng);
    const double mi = mutual_information(f, q, 1.0);

    // Joint negation of points and thresholds leaves I unchanged.
    InputDistribution neg;
    neg.points.assign(f.points.rbegin(), f.points.rend());
    for (double& v : neg.points) v = -v;
    neg.probs.assign(f.probs.rbegin(), f.probs.rend());
    std::vector<double> nq(q.thresholds().rbegin(), q.thresholds().rend());
    for (double& v : nq) v = -v;
    const double mi_neg = mutual_information(neg, QuantizerSpec(nq), 1.0);
    CHECK(mi == doctest::Approx(mi_neg).epsilon(1e-12));

    CHECK(mi >= -1e-12);
    CHECK(mi <= f.entropy_bits() + 1e-12);
    CHECK(mi <= std::log2(static_cast<double>(q.bins())) + 1e-12);
  }
}

TEST_CASE("divergence properties") {
  const QuantizerSpec q1({0.0});
  InputDistribution pm{{-1.0, 1.0}, {0.5, 0.5}};

  // At the support of the symmetric two-point input, d equals I.
  const double mi = mutual_information(pm, q1, 1.0);
  CHECK(divergence(1.0, pm, q1, 1.0) == doctest::Approx(mi).epsilon(1e-12));
  CHECK(divergence(-1.0, pm, q1, 1.0) == doctest::Approx(mi).epsilon(1e-12));

  // W(0) equals the output pmf, so the divergence vanishes.
  CHECK(divergence(0.0, pm, q1, 1.0) == doctest::Approx(0.0).epsilon(1e-14));

  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const QuantizerSpec q = random_quantizer(rng);
    const InputDistribution f = random_input(rng);
    std::uniform_real_distribution<double> xdist(-6.0, 6.0);
    CHECK(divergence(xdist(rng), f, q, 1.0) >= -1e-12);
  }
}

TEST_CASE("divergence saturates to -log2 R(y_K)") {
  const QuantizerSpec q({-1.0, 1.0});
  InputDistribution pm{{-1.0, 1.0}, {0.5, 0.5}};
  const OutputPmf r = output_pmf(pm, transition_matrix(pm, q, 1.0));
  const double level = -std::log2(r.probs.back());
  CHECK(std::abs(divergence(1.0 + 40.0, pm, q, 1.0) - level) < 1e-6);
  for (double x = 1.0 + 10.0; x <= 1.0 + 30.0; x += 5.0)
    CHECK(std::abs(divergence(x, pm, q, 1.0) - level) < 1e-6);
}

TEST_CASE("divergence reports unreachable bins as +inf") {
  // All input mass far to the left leaves the upper bin with zero output
  // probability, while W at x = 0 still reaches it.
  InputDistribution far{{-50.0}, {1.0}};
  const QuantizerSpec q({0.0});
  CHECK(std::isinf(divergence(0.0, far, q, 1.0)));
  CHECK(divergence(0.0, far, q, 1.0) > 0.0);
}

TEST_CASE("input distribution validation") {
  InputDistribution bad{{1.0, 0.0}, {0.5, 0.5}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  InputDistribution bad2{{0.0, 1.0}, {0.6, 0.6}};
  CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);
  InputDistribution ok{{-1.0, 1.0}, {0.25, 0.75}};
  ok.validate();
  CHECK(ok.avg_power() == doctest::Approx(1.0));
  CHECK(ok.entropy_bits() == doctest::Approx(binary_entropy_bits(0.25)).epsilon(1e-14));
}
