#include "quantcap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "golden.hpp"

namespace quantcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMergeRadiusSigma = 1e-6;   // mass points closer than this (in sigma) are merged
constexpr double kMinThresholdGap = 1e-12;   // degenerate-quantizer rejection
constexpr double kDeadBinLog2 = -1e7;        // stands in for log2(0) in grid divergences

// Support set with its transition rows and per-row entropies cached.
struct SupportWork {
  std::vector<double> x;
  std::vector<double> w;       // m x K, row-major
  std::vector<double> rowent;  // sum_i w log2 w per row
  int k = 0;

  void rebuild(const QuantizerSpec& qz, double sigma) {
    k = qz.bins();
    const std::size_t m = x.size();
    w.assign(m * k, 0.0);
    rowent.assign(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const std::vector<double> row = transition_row(x[j], qz, sigma);
      double ent = 0.0;
      for (int i = 0; i < k; ++i) {
        w[j * k + i] = row[i];
        if (row[i] > 0.0) ent += row[i] * std::log2(row[i]);
      }
      rowent[j] = ent;
    }
  }
};

struct InnerOut {
  std::vector<double> p;  // m
  std::vector<double> r;  // K, output pmf
  std::vector<double> d;  // m, divergence per support point
  double mi = 0.0;
  double power = 0.0;
  bool converged = false;
  int iters = 0;
};

void output_pmf_of(const SupportWork& s, const std::vector<double>& p,
                   std::vector<double>& r) {
  r.assign(s.k, 0.0);
  for (std::size_t j = 0; j < s.x.size(); ++j) {
    if (p[j] <= 0.0) continue;
    for (int i = 0; i < s.k; ++i) r[i] += p[j] * s.w[j * s.k + i];
  }
}

void divergences_of(const SupportWork& s, const std::vector<double>& r,
                    std::vector<double>& d) {
  std::vector<double> log2r(s.k);
  for (int i = 0; i < s.k; ++i) log2r[i] = r[i] > 0.0 ? std::log2(r[i]) : kDeadBinLog2;
  const std::size_t m = s.x.size();
  d.assign(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double acc = 0.0;
    for (int i = 0; i < s.k; ++i) acc += s.w[j * s.k + i] * log2r[i];
    d[j] = s.rowent[j] - acc;
  }
}

// Multiplicative fixed point for max_p I(p) - gamma E_p[X^2] on a fixed support.
InnerOut ba_fixed_point(const SupportWork& s, double gamma, const SolverOptions& opts,
                        std::vector<double> p) {
  const std::size_t m = s.x.size();
  InnerOut out;
  if (p.size() != m) p.assign(m, 1.0 / static_cast<double>(m));

  std::vector<double> x2(m);
  for (std::size_t j = 0; j < m; ++j) x2[j] = s.x[j] * s.x[j];

  std::vector<double> d(m), t(m);
  double prev_obj = -kInf;
  int it = 0;
  for (; it < opts.max_inner_iters; ++it) {
    output_pmf_of(s, p, out.r);
    divergences_of(s, out.r, d);

    if (opts.check_inner_monotone) {
      double obj = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        if (p[j] > 0.0) obj += p[j] * (d[j] - gamma * x2[j]);
      if (obj < prev_obj - 1e-11)
        throw std::logic_error("constrained_fixed_point: objective decreased");
      prev_obj = obj;
    }

    double emax = -kInf;
    for (std::size_t j = 0; j < m; ++j)
      if (p[j] > 0.0) emax = std::max(emax, d[j] - gamma * x2[j]);
    double z = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      t[j] = p[j] > 0.0 ? p[j] * std::exp2(d[j] - gamma * x2[j] - emax) : 0.0;
      z += t[j];
    }
    double delta = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double pn = t[j] / z;
      delta = std::max(delta, std::abs(pn - p[j]));
      p[j] = pn;
    }
    if (delta < opts.inner_tol) {
      out.converged = true;
      ++it;
      break;
    }
  }

  // Final statistics at the returned iterate.
  output_pmf_of(s, p, out.r);
  divergences_of(s, out.r, out.d);
  out.mi = 0.0;
  out.power = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (p[j] > 0.0) out.mi += p[j] * out.d[j];
    out.power += p[j] * x2[j];
  }
  out.p = std::move(p);
  out.iters = it;
  return out;
}

struct PowerOut {
  InnerOut inner;
  double gamma = 0.0;
  bool bracket_ok = true;
};

// Largest-capacity distribution on the support subject to E[X^2] <= P:
// bisection on gamma, whose achieved power is monotone nonincreasing.
PowerOut solve_power(const SupportWork& s, double P, const SolverOptions& opts,
                     double gamma_warm) {
  PowerOut out;
  const double abs_tol = opts.power_tol * P;
  std::vector<double> seed;  // uniform
  InnerOut r0 = ba_fixed_point(s, 0.0, opts, seed);
  if (r0.power <= P + abs_tol) {
    out.inner = std::move(r0);
    out.gamma = 0.0;
    return out;
  }

  double lo = 0.0;
  double hi = gamma_warm > 0.0 ? gamma_warm : 1.0;
  InnerOut rhi = ba_fixed_point(s, hi, opts, r0.p);
  int guard = 0;
  while (rhi.power > P && guard++ < 400) {
    lo = hi;
    hi *= 2.0;
    rhi = ba_fixed_point(s, hi, opts, rhi.p);
  }
  if (rhi.power > P) {
    out.inner = std::move(rhi);
    out.gamma = hi;
    out.bracket_ok = false;
    return out;
  }
  // Shrink a warm upper bracket so the bisection starts tight.
  while (lo == 0.0 && hi > 1e-12) {
    const double cand = hi / 2.0;
    InnerOut rc = ba_fixed_point(s, cand, opts, rhi.p);
    if (rc.power > P) {
      lo = cand;
      break;
    }
    hi = cand;
    rhi = std::move(rc);
  }

  for (int i = 0; i < 200; ++i) {
    if (P - rhi.power <= abs_tol) break;
    if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
    const double mid = 0.5 * (lo + hi);
    InnerOut rm = ba_fixed_point(s, mid, opts, rhi.p);
    if (rm.power > P) {
      lo = mid;
    } else {
      hi = mid;
      rhi = std::move(rm);
    }
  }
  out.inner = std::move(rhi);
  out.gamma = hi;
  return out;
}

struct GammaCert {
  double gamma = 0.0;
  double slack = 0.0;
};

// min over gamma >= 0 of max over the evaluation set of
// d(x) + gamma (P - x^2) - I; the envelope is convex piecewise-linear.
GammaCert certify_gamma(const std::vector<double>& d, const std::vector<double>& xs,
                        double mi, double P, double hint) {
  auto envelope = [&](double g) {
    double m = -kInf;
    for (std::size_t i = 0; i < d.size(); ++i)
      m = std::max(m, d[i] + g * (P - xs[i] * xs[i]) - mi);
    return m;
  };
  double g_hi = std::max(1.0, 2.0 * hint);
  double m_hi = envelope(g_hi);
  for (int i = 0; i < 200; ++i) {
    const double m2 = envelope(2.0 * g_hi);
    if (m2 < m_hi) {
      g_hi *= 2.0;
      m_hi = m2;
    } else {
      break;
    }
  }
  const double g = detail::golden_min(envelope, 0.0, g_hi, g_hi * 1e-14 + 1e-18);
  const double m0 = envelope(0.0);
  const double mg = envelope(g);
  return m0 <= mg ? GammaCert{0.0, m0} : GammaCert{g, mg};
}

// Candidate grid transition probabilities, cached once per solve.
struct GridCache {
  std::vector<double> x;
  std::vector<double> w;       // n x K, row-major
  std::vector<double> rowent;  // n
  int k = 0;

  void build(const std::vector<double>& grid, const QuantizerSpec& qz, double sigma) {
    x = grid;
    k = qz.bins();
    const std::size_t n = x.size();
    w.assign(n * k, 0.0);
    rowent.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<double> row = transition_row(x[i], qz, sigma);
      double ent = 0.0;
      for (int c = 0; c < k; ++c) {
        w[i * k + c] = row[c];
        if (row[c] > 0.0) ent += row[c] * std::log2(row[c]);
      }
      rowent[i] = ent;
    }
  }

  void divergences(const std::vector<double>& r, std::vector<double>& d) const {
    std::vector<double> log2r(k);
    for (int c = 0; c < k; ++c) log2r[c] = r[c] > 0.0 ? std::log2(r[c]) : kDeadBinLog2;
    const std::size_t n = x.size();
    d.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int c = 0; c < k; ++c) acc += w[i * k + c] * log2r[c];
      d[i] = rowent[i] - acc;
    }
  }
};

void merge_close(std::vector<double>& x, std::vector<double>& p, double radius) {
  if (x.size() < 2) return;
  std::vector<double> mx, mp;
  mx.reserve(x.size());
  mp.reserve(x.size());
  double cx = x[0] * p[0], cp = p[0], last = x[0];
  auto flush = [&] {
    mx.push_back(cp > 0.0 ? cx / cp : last);
    mp.push_back(cp);
  };
  for (std::size_t j = 1; j < x.size(); ++j) {
    if (x[j] - last <= radius) {
      cx += x[j] * p[j];
      cp += p[j];
    } else {
      flush();
      cx = x[j] * p[j];
      cp = p[j];
    }
    last = x[j];
  }
  flush();
  x = std::move(mx);
  p = std::move(mp);
}

void prune_small(std::vector<double>& x, std::vector<double>& p, double prune_prob) {
  std::vector<double> nx, np;
  double sum = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (p[j] >= prune_prob) {
      nx.push_back(x[j]);
      np.push_back(p[j]);
      sum += p[j];
    }
  }
  if (nx.empty() || sum <= 0.0) return;  // keep as-is rather than emptying the support
  for (double& v : np) v /= sum;
  x = std::move(nx);
  p = std::move(np);
}

double auto_half_width_sigma(const ChannelParams& params, const QuantizerSpec& qz) {
  const double sigma = params.noise_std();
  const double reach = std::max(std::abs(qz.thresholds().front()),
                                std::abs(qz.thresholds().back())) +
                       10.0 * sigma;
  return std::max(reach, 3.0 * std::sqrt(params.power)) / sigma;
}

void check_quantizer_gaps(const QuantizerSpec& qz) {
  const auto& q = qz.thresholds();
  for (std::size_t i = 1; i < q.size(); ++i)
    if (q[i] - q[i - 1] < kMinThresholdGap)
      throw std::invalid_argument("capacity: degenerate quantizer (thresholds too close)");
}

// Divergence at an arbitrary x against a fixed output pmf.
double divergence_at(double x, const QuantizerSpec& qz, double sigma,
                     const std::vector<double>& r) {
  return detail::divergence_bits(transition_row(x, qz, sigma), r);
}

InputDistribution make_distribution(std::vector<double> x, std::vector<double> p) {
  double sum = 0.0;
  for (double v : p) sum += v;
  for (double& v : p) v /= sum;
  InputDistribution f;
  f.points = std::move(x);
  f.probs = std::move(p);
  return f;
}

}  // namespace

void SolverOptions::validate() const {
  if (!(grid_step > 0.0) || !(kkt_tol > 0.0) || !(power_tol > 0.0) ||
      !(prune_prob > 0.0) || !(inner_tol > 0.0))
    throw std::invalid_argument("SolverOptions: tolerances must be positive");
  if (grid_half_width > 0.0 && !(grid_step < grid_half_width))
    throw std::invalid_argument("SolverOptions: grid_step must be below grid_half_width");
  if (max_outer_iters < 1 || max_inner_iters < 1)
    throw std::invalid_argument("SolverOptions: iteration caps must be >= 1");
}

std::vector<double> candidate_grid(const ChannelParams& params,
                                   const QuantizerSpec& quantizer,
                                   const SolverOptions& opts) {
  opts.validate();
  const double sigma = params.noise_std();
  const double half_sigma = opts.grid_half_width > 0.0
                                ? opts.grid_half_width
                                : auto_half_width_sigma(params, quantizer);
  const double step = opts.grid_step * sigma;
  const int n = static_cast<int>(std::ceil(half_sigma / opts.grid_step - 1e-12));
  std::vector<double> grid;
  grid.reserve(2 * n + 1);
  for (int i = -n; i <= n; ++i) grid.push_back(i * step);
  return grid;
}

CapacityResult one_bit_capacity(const ChannelParams& params) {
  const double sigma = params.noise_std();
  const double s = std::sqrt(params.snr());
  const double eps = qfunc(s);
  const double cap = 1.0 - binary_entropy_bits(eps);

  InputDistribution f;
  const double a = std::sqrt(params.power);
  if (a > 0.0) {
    f.points = {-a, a};
    f.probs = {0.5, 0.5};
  } else {
    f.points = {0.0};
    f.probs = {1.0};
  }

  const QuantizerSpec qz({0.0});
  const std::vector<double> grid = candidate_grid(params, qz);
  const OutputPmf r = output_pmf(f, transition_matrix(f, qz, sigma));
  const double mi = mutual_information(f, qz, sigma);

  std::vector<double> xs = grid;
  std::vector<double> d(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    d[i] = divergence_at(grid[i], qz, sigma, r.probs);
  for (double xj : f.points) {
    xs.push_back(xj);
    d.push_back(divergence_at(xj, qz, sigma, r.probs));
  }

  // Stationarity at the mass points seeds the certifying-multiplier search.
  double gamma_hint;
  if (s > 1e-8) {
    const double dprime = gauss_pdf(s) / sigma * std::log2((1.0 - eps) / eps);
    gamma_hint = dprime / (2.0 * a);
  } else {
    // Low-power limit of d'(sqrt(P)) / (2 sqrt(P)): 1 / (pi ln2 sigma^2).
    gamma_hint = 1.0 / (std::numbers::pi * std::numbers::ln2 * params.noise_var);
  }
  const GammaCert cert = certify_gamma(d, xs, mi, params.power, gamma_hint);

  CapacityResult res;
  res.capacity = cap;
  res.distribution = std::move(f);
  res.gamma = cert.gamma;
  res.kkt_slack = cert.slack;
  res.power_used = res.distribution.avg_power();
  res.outer_iters = 0;
  res.converged = true;
  return res;
}

FixedPointResult constrained_fixed_point(const std::vector<double>& points,
                                         const ChannelParams& params,
                                         const QuantizerSpec& quantizer,
                                         double gamma, const SolverOptions& opts) {
  opts.validate();
  if (points.empty())
    throw std::invalid_argument("constrained_fixed_point: empty support");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i - 1] < points[i]))
      throw std::invalid_argument(
          "constrained_fixed_point: points must be strictly increasing");
  if (!(gamma >= 0.0))
    throw std::invalid_argument("constrained_fixed_point: gamma must be >= 0");

  SupportWork s;
  s.x = points;
  s.rebuild(quantizer, params.noise_std());
  InnerOut inner = ba_fixed_point(s, gamma, opts, {});

  FixedPointResult res;
  res.distribution = make_distribution(s.x, inner.p);
  res.converged = inner.converged;
  res.iterations = inner.iters;
  return res;
}

CapacityResult capacity(const ChannelParams& params, const QuantizerSpec& quantizer,
                        const SolverOptions& opts) {
  opts.validate();
  check_quantizer_gaps(quantizer);
  if (!(params.power > 0.0))
    throw std::invalid_argument("capacity: power must be > 0");

  const double sigma = params.noise_std();
  const double P = params.power;
  const double step = opts.grid_step * sigma;
  const double merge_radius = kMergeRadiusSigma * sigma;

  const std::vector<double> grid = candidate_grid(params, quantizer, opts);
  const double half = grid.back();
  const int center = static_cast<int>(grid.size() / 2);

  GridCache cache;
  cache.build(grid, quantizer, sigma);

  // Initial support: antipodal points at +-sqrt(P) plus the midpoints of
  // adjacent thresholds, clipped to the candidate extent.
  std::vector<double> sx;
  const double a0 = std::sqrt(P);
  sx.push_back(-a0);
  sx.push_back(a0);
  const auto& q = quantizer.thresholds();
  for (std::size_t i = 0; i + 1 < q.size(); ++i) sx.push_back(0.5 * (q[i] + q[i + 1]));
  for (double& v : sx) v = std::clamp(v, -half, half);
  std::sort(sx.begin(), sx.end());
  {
    std::vector<double> dummy(sx.size(), 1.0 / static_cast<double>(sx.size()));
    merge_close(sx, dummy, merge_radius);
  }

  SupportWork work;
  work.x = sx;
  work.rebuild(quantizer, sigma);

  CapacityResult best;
  double best_slack = kInf;
  double gamma_warm = 0.0;
  std::vector<double> gd;  // divergences over the grid

  auto fill_result = [&](const InnerOut& inner, const GammaCert& cert, int iters,
                         bool converged) {
    CapacityResult r;
    r.capacity = inner.mi;
    r.distribution = make_distribution(work.x, inner.p);
    r.gamma = cert.gamma;
    r.kkt_slack = cert.slack;
    r.power_used = inner.power;
    r.outer_iters = iters;
    r.converged = converged;
    return r;
  };

  for (int outer = 1; outer <= opts.max_outer_iters; ++outer) {
    PowerOut ps = solve_power(work, P, opts, gamma_warm);
    if (!ps.bracket_ok) {
      // Support lost every point inside the power ball; reseed with 0.
      if (std::none_of(work.x.begin(), work.x.end(),
                       [](double v) { return std::abs(v) < 1e-9; })) {
        work.x.push_back(0.0);
        std::sort(work.x.begin(), work.x.end());
        work.rebuild(quantizer, sigma);
        continue;
      }
      throw std::logic_error("capacity: power constraint infeasible on support");
    }
    gamma_warm = ps.gamma;

    // Drop negligible mass and collapse near-duplicate grid hits.
    std::vector<double> px = work.x, pp = ps.inner.p;
    prune_small(px, pp, opts.prune_prob);
    merge_close(px, pp, merge_radius);
    if (px != work.x) {
      work.x = px;
      work.rebuild(quantizer, sigma);
      ps = solve_power(work, P, opts, gamma_warm);
      gamma_warm = ps.gamma;
    }

    const InnerOut& inner = ps.inner;

    cache.divergences(inner.r, gd);
    std::vector<double> ds = gd;
    std::vector<double> xs = cache.x;
    for (std::size_t j = 0; j < work.x.size(); ++j) {
      xs.push_back(work.x[j]);
      ds.push_back(inner.d[j]);
    }

    GammaCert cert;
    if (P - inner.power > opts.power_tol * P && ps.gamma == 0.0) {
      cert.gamma = 0.0;
      double m = -kInf;
      for (std::size_t i = 0; i < ds.size(); ++i)
        m = std::max(m, ds[i] - inner.mi);
      cert.slack = m;
    } else {
      cert = certify_gamma(ds, xs, inner.mi, P, ps.gamma);
    }

    if (cert.slack < best_slack) {
      best = fill_result(inner, cert, outer, false);
      best_slack = cert.slack;
    }

    if (cert.slack <= opts.kkt_tol) {
      CapacityResult res = fill_result(inner, cert, outer, true);

      // The optimum needs at most K+1 mass points; shed certified extras.
      while (static_cast<int>(work.x.size()) > quantizer.bins() + 1) {
        const std::size_t drop = static_cast<std::size_t>(
            std::min_element(res.distribution.probs.begin(),
                             res.distribution.probs.end()) -
            res.distribution.probs.begin());
        SupportWork trial = work;
        trial.x.erase(trial.x.begin() + drop);
        trial.rebuild(quantizer, sigma);
        PowerOut tps = solve_power(trial, P, opts, gamma_warm);
        if (!tps.bracket_ok) break;
        cache.divergences(tps.inner.r, gd);
        std::vector<double> tds = gd, txs = cache.x;
        for (std::size_t j = 0; j < trial.x.size(); ++j) {
          txs.push_back(trial.x[j]);
          tds.push_back(tps.inner.d[j]);
        }
        const GammaCert tcert = certify_gamma(tds, txs, tps.inner.mi, P, tps.gamma);
        if (tcert.slack > opts.kkt_tol) break;
        work = std::move(trial);
        gamma_warm = tps.gamma;
        res = fill_result(tps.inner, tcert, res.outer_iters, true);
      }
      return res;
    }

    // Most-violating candidate: scan outward so ties resolve to smallest |x|.
    int best_idx = center;
    double best_g = -kInf;
    const double gP = cert.gamma * P;
    auto slack_at = [&](int idx) {
      return gd[idx] + gP - cert.gamma * cache.x[idx] * cache.x[idx] - inner.mi;
    };
    for (int dist = 0; dist <= center; ++dist) {
      for (const int idx : {center + dist, center - dist}) {
        if (idx < 0 || idx >= static_cast<int>(cache.x.size())) continue;
        const double g = slack_at(idx);
        if (g > best_g) {
          best_g = g;
          best_idx = idx;
        }
        if (dist == 0) break;
      }
    }

    auto slack_fn = [&](double x) {
      return divergence_at(x, quantizer, sigma, inner.r) +
             cert.gamma * (P - x * x) - inner.mi;
    };
    const double lo = std::max(cache.x[best_idx] - step, -half);
    const double hi = std::min(cache.x[best_idx] + step, half);
    const double candidate = detail::golden_max(slack_fn, lo, hi, 1e-10 * sigma);

    // Nudge the existing points onto their local equality maxima so clusters
    // collapse instead of accumulating near-duplicates.
    std::vector<double> polished(work.x.size());
    for (std::size_t j = 0; j < work.x.size(); ++j) {
      double plo = work.x[j] - step;
      double phi = work.x[j] + step;
      if (j > 0) plo = std::max(plo, 0.5 * (work.x[j - 1] + work.x[j]));
      if (j + 1 < work.x.size()) phi = std::min(phi, 0.5 * (work.x[j] + work.x[j + 1]));
      plo = std::max(plo, -half);
      phi = std::min(phi, half);
      polished[j] = detail::golden_max(slack_fn, plo, phi, 1e-10 * sigma);
    }
    polished.push_back(std::clamp(candidate, -half, half));
    std::sort(polished.begin(), polished.end());
    std::vector<double> dummy(polished.size(), 1.0 / static_cast<double>(polished.size()));
    merge_close(polished, dummy, merge_radius);
    work.x = polished;
    work.rebuild(quantizer, sigma);
  }

  best.outer_iters = opts.max_outer_iters;
  best.converged = false;
  return best;
}

double kkt_certify(const CapacityResult& result, const ChannelParams& params,
                   const QuantizerSpec& quantizer, const std::vector<double>& grid,
                   double kkt_tol, double support_tol) {
  if (grid.empty()) throw std::invalid_argument("kkt_certify: empty grid");
  result.distribution.validate();
  const double sigma = params.noise_std();
  const OutputPmf r =
      output_pmf(result.distribution, transition_matrix(result.distribution, quantizer, sigma));
  double max_slack = -kInf;
  for (double x : grid) {
    const double g = divergence_at(x, quantizer, sigma, r.probs) +
                     result.gamma * (params.power - x * x) - result.capacity;
    max_slack = std::max(max_slack, g);
  }
  if (max_slack <= kkt_tol) {
    const double dev = kkt_support_deviation(result, params, quantizer);
    if (dev > support_tol)
      throw std::runtime_error(
          "kkt_certify: certificate inconsistent (support equality violated)");
  }
  return max_slack;
}

double kkt_support_deviation(const CapacityResult& result, const ChannelParams& params,
                             const QuantizerSpec& quantizer) {
  result.distribution.validate();
  const double sigma = params.noise_std();
  const OutputPmf r =
      output_pmf(result.distribution, transition_matrix(result.distribution, quantizer, sigma));
  double dev = 0.0;
  for (double x : result.distribution.points) {
    const double g = divergence_at(x, quantizer, sigma, r.probs) +
                     result.gamma * (params.power - x * x) - result.capacity;
    dev = std::max(dev, std::abs(g));
  }
  return dev;
}

namespace {

struct TailScan {
  double level = 0.0;   // L for this tail
  double onset = 0.0;   // A0
  bool saturated = false;
};

// Upper-tail behaviour of d(x;F): saturation level and onset past the last
// threshold. Assumes the quantizer/input pair given (mirror for the lower tail).
TailScan scan_upper_tail(const InputDistribution& input, const QuantizerSpec& qz,
                         double sigma) {
  const OutputPmf r = output_pmf(input, transition_matrix(input, qz, sigma));
  TailScan scan;
  const double rk = r.probs.back();
  scan.level = rk > 0.0 ? -std::log2(rk) : kInf;
  const double q_last = qz.thresholds().back();
  const double step = 0.01 * sigma;

  for (const double extent : {10.0, 20.0}) {
    const double x_sat = q_last + extent * sigma;
    const double d_sat = detail::divergence_bits(transition_row(x_sat, qz, sigma), r.probs);
    if (!(std::abs(d_sat - scan.level) <= 1e-6)) continue;
    const int n = static_cast<int>(std::ceil(extent * sigma / step));
    int last_above = 0;  // 0 means "never at or above L"
    for (int i = 1; i <= n; ++i) {
      const double x = q_last + i * step;
      const double d = detail::divergence_bits(transition_row(x, qz, sigma), r.probs);
      if (d >= scan.level) last_above = i;
    }
    scan.onset = q_last + (last_above + 1) * step;
    scan.saturated = true;
    return scan;
  }
  scan.onset = q_last + 20.0 * sigma;
  return scan;
}

double pick_tail_bound(double gamma, double cap, double level, double onset, double P) {
  if (gamma > 1e-12) {
    if (cap > level + gamma * P) return onset;
    return std::max(onset, std::sqrt((level + gamma * P - cap) / gamma));
  }
  return onset;
}

}  // namespace

SupportBound support_bound(const InputDistribution& input, const ChannelParams& params,
                           const QuantizerSpec& quantizer, double gamma) {
  input.validate();
  if (!(gamma >= 0.0)) throw std::invalid_argument("support_bound: gamma must be >= 0");
  const double sigma = params.noise_std();
  const double cap = mutual_information(input, quantizer, sigma);

  const TailScan up = scan_upper_tail(input, quantizer, sigma);
  const double upper = pick_tail_bound(gamma, cap, up.level, up.onset, params.power);

  // Lower tail via the mirrored problem.
  InputDistribution mirrored;
  mirrored.points.assign(input.points.rbegin(), input.points.rend());
  for (double& v : mirrored.points) v = -v;
  mirrored.probs.assign(input.probs.rbegin(), input.probs.rend());
  std::vector<double> mq(quantizer.thresholds().rbegin(), quantizer.thresholds().rend());
  for (double& v : mq) v = -v;
  const QuantizerSpec mqz(std::move(mq));
  const TailScan lo = scan_upper_tail(mirrored, mqz, sigma);
  const double lower = -pick_tail_bound(gamma, cap, lo.level, lo.onset, params.power);

  SupportBound b;
  b.lower = lower;
  b.upper = upper;
  b.saturation_level = up.level;
  b.onset = up.onset;
  b.saturated = up.saturated && lo.saturated;
  return b;
}

}  // namespace quantcap
