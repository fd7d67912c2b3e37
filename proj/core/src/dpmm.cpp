/*
 * Copyright 2026 The survsynth Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "survsynth/dpmm.hpp"

#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "survsynth/error.hpp"

namespace survsynth {
namespace {

using boost::math::digamma;

constexpr double kLog2Pi = 1.8378770664093453;  // log(2 pi)
constexpr double kDegenerateVariance = 1e-6;

// Data compressed to distinct values with multiplicities; responsibilities
// depend on y only, so this is exact.
struct Points {
  std::vector<double> value;
  std::vector<double> count;
  double total = 0.0;
};

struct Prior {
  double alpha, m0, beta0, a0, b0;
};

struct State {
  int K = 0;
  std::vector<double> g1, g2;          // q(v_k) = Beta(g1, g2), k < K-1
  std::vector<double> m, beta, a, b;   // q(mu_k, lambda_k)
  std::vector<double> phi;             // |points| x K, row-major
};

struct Expectations {
  std::vector<double> log_pi, log_lambda, lambda;
  std::vector<double> log_v, log_1mv;
};

Expectations expectations(const State& s) {
  Expectations e;
  const int K = s.K;
  e.log_pi.assign(K, 0.0);
  e.log_v.assign(K, 0.0);
  e.log_1mv.assign(K, 0.0);
  double acc = 0.0;
  for (int k = 0; k < K; ++k) {
    if (k < K - 1) {
      const double dsum = digamma(s.g1[k] + s.g2[k]);
      e.log_v[k] = digamma(s.g1[k]) - dsum;
      e.log_1mv[k] = digamma(s.g2[k]) - dsum;
    }
    e.log_pi[k] = e.log_v[k] + acc;  // log v_K = 0
    acc += e.log_1mv[k];
  }
  e.log_lambda.resize(K);
  e.lambda.resize(K);
  for (int k = 0; k < K; ++k) {
    e.log_lambda[k] = digamma(s.a[k]) - std::log(s.b[k]);
    e.lambda[k] = s.a[k] / s.b[k];
  }
  return e;
}

// E_q[log N(y | mu_k, 1/lambda_k)]
double expected_loglik(const State& s, const Expectations& e, int k, double y) {
  const double d = y - s.m[k];
  return 0.5 * e.log_lambda[k] - 0.5 * kLog2Pi - 0.5 * (1.0 / s.beta[k] + e.lambda[k] * d * d);
}

void update_global(const Points& pts, const Prior& prior, State& s) {
  const int K = s.K;
  const std::size_t n = pts.value.size();
  std::vector<double> nk(K, 0.0), sum(K, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < K; ++k) {
      const double w = pts.count[i] * s.phi[i * K + k];
      nk[k] += w;
      sum[k] += w * pts.value[i];
    }
  }
  std::vector<double> mean(K, 0.0), scatter(K, 0.0);
  for (int k = 0; k < K; ++k) mean[k] = nk[k] > 0.0 ? sum[k] / nk[k] : prior.m0;
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < K; ++k) {
      const double d = pts.value[i] - mean[k];
      scatter[k] += pts.count[i] * s.phi[i * K + k] * d * d;
    }
  }
  double tail = 0.0;
  for (int k = K - 1; k >= 0; --k) {
    if (k < K - 1) {
      s.g1[k] = 1.0 + nk[k];
      s.g2[k] = prior.alpha + tail;
    }
    tail += nk[k];
  }
  for (int k = 0; k < K; ++k) {
    s.beta[k] = prior.beta0 + nk[k];
    s.m[k] = (prior.beta0 * prior.m0 + nk[k] * mean[k]) / s.beta[k];
    s.a[k] = prior.a0 + 0.5 * nk[k];
    const double dm = mean[k] - prior.m0;
    s.b[k] = prior.b0 + 0.5 * scatter[k] + prior.beta0 * nk[k] * dm * dm / (2.0 * s.beta[k]);
  }
}

void update_local(const Points& pts, State& s) {
  const int K = s.K;
  const auto e = expectations(s);
  std::vector<double> logp(K);
  for (std::size_t i = 0; i < pts.value.size(); ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      logp[k] = e.log_pi[k] + expected_loglik(s, e, k, pts.value[i]);
      mx = std::max(mx, logp[k]);
    }
    double z = 0.0;
    for (int k = 0; k < K; ++k) {
      logp[k] = std::exp(logp[k] - mx);
      z += logp[k];
    }
    for (int k = 0; k < K; ++k) s.phi[i * K + k] = logp[k] / z;
  }
}

double log_normal_gamma_expectation(const Expectations& e, int k, double m, double beta, double a,
                                    double b, const State& s) {
  // E_q[log NG(mu_k, lambda_k | m, beta, a, b)]
  const double d = s.m[k] - m;
  const double quad = 1.0 / s.beta[k] + e.lambda[k] * d * d;  // E[lambda (mu - m)^2]
  return 0.5 * std::log(beta) + 0.5 * e.log_lambda[k] - 0.5 * kLog2Pi - 0.5 * beta * quad +
         a * std::log(b) - std::lgamma(a) + (a - 1.0) * e.log_lambda[k] - b * e.lambda[k];
}

double elbo(const Points& pts, const Prior& prior, const State& s) {
  const int K = s.K;
  const auto e = expectations(s);
  double total = 0.0;
  for (std::size_t i = 0; i < pts.value.size(); ++i) {
    for (int k = 0; k < K; ++k) {
      const double p = s.phi[i * K + k];
      if (p <= 0.0) continue;
      total += pts.count[i] * p *
               (expected_loglik(s, e, k, pts.value[i]) + e.log_pi[k] - std::log(p));
    }
  }
  for (int k = 0; k < K - 1; ++k) {
    // E[log Beta(v | 1, alpha)] - E[log Beta(v | g1, g2)]
    total += std::log(prior.alpha) + (prior.alpha - 1.0) * e.log_1mv[k];
    total -= std::lgamma(s.g1[k] + s.g2[k]) - std::lgamma(s.g1[k]) - std::lgamma(s.g2[k]) +
             (s.g1[k] - 1.0) * e.log_v[k] + (s.g2[k] - 1.0) * e.log_1mv[k];
  }
  for (int k = 0; k < K; ++k) {
    total += log_normal_gamma_expectation(e, k, prior.m0, prior.beta0, prior.a0, prior.b0, s);
    total -= log_normal_gamma_expectation(e, k, s.m[k], s.beta[k], s.a[k], s.b[k], s);
  }
  return total;
}

// 1-D Lloyd iterations from the given centers; returns a label per point,
// relabelled so larger clusters get lower indices.
std::vector<int> kmeans_labels(const Points& pts, std::vector<double> centers) {
  const std::size_t n = pts.value.size();
  std::vector<int> label(n, 0);
  for (int iter = 0; iter < 50; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = std::abs(pts.value[i] - centers[c]);
        if (d < bd) {
          bd = d;
          best = static_cast<int>(c);
        }
      }
      if (label[i] != best) changed = true;
      label[i] = best;
    }
    std::vector<double> sum(centers.size(), 0.0), cnt(centers.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      sum[label[i]] += pts.count[i] * pts.value[i];
      cnt[label[i]] += pts.count[i];
    }
    for (std::size_t c = 0; c < centers.size(); ++c) {
      if (cnt[c] > 0) centers[c] = sum[c] / cnt[c];
    }
    if (!changed && iter > 0) break;
  }
  std::vector<double> cnt(centers.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) cnt[label[i]] += pts.count[i];
  std::vector<int> order(centers.size());
  for (std::size_t c = 0; c < order.size(); ++c) order[c] = static_cast<int>(c);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return cnt[x] > cnt[y]; });
  std::vector<int> rank(centers.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<int>(r);
  for (auto& l : label) l = rank[l];
  return label;
}

std::vector<double> quantile_centers(const Points& pts, int k) {
  std::vector<double> centers;
  double cum = 0.0;
  std::size_t i = 0;
  for (int c = 0; c < k; ++c) {
    const double target = (c + 0.5) / k * pts.total;
    while (i + 1 < pts.value.size() && cum + pts.count[i] < target) cum += pts.count[i++];
    centers.push_back(pts.value[i]);
  }
  return centers;
}

std::vector<double> kmeanspp_centers(const Points& pts, int k, std::mt19937_64& rng) {
  std::vector<double> centers;
  std::discrete_distribution<std::size_t> first(pts.count.begin(), pts.count.end());
  centers.push_back(pts.value[first(rng)]);
  std::vector<double> w(pts.value.size());
  while (static_cast<int>(centers.size()) < k) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      double d = std::numeric_limits<double>::infinity();
      for (double c : centers) d = std::min(d, (pts.value[i] - c) * (pts.value[i] - c));
      w[i] = pts.count[i] * d;
    }
    if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; })) break;
    std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
    centers.push_back(pts.value[pick(rng)]);
  }
  return centers;
}

struct RunResult {
  State state;
  std::vector<double> trace;
};

RunResult run_cavi(const Points& pts, const Prior& prior, const DpmmConfig& cfg,
                   const std::vector<int>& init_labels) {
  State s;
  s.K = cfg.truncation;
  const int K = s.K;
  s.g1.assign(K, 1.0);
  s.g2.assign(K, prior.alpha);
  s.m.assign(K, prior.m0);
  s.beta.assign(K, prior.beta0);
  s.a.assign(K, prior.a0);
  s.b.assign(K, prior.b0);
  s.phi.assign(pts.value.size() * K, 0.0);
  for (std::size_t i = 0; i < pts.value.size(); ++i) s.phi[i * K + init_labels[i]] = 1.0;

  RunResult r;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    update_global(pts, prior, s);
    const double value = elbo(pts, prior, s);
    r.trace.push_back(value);
    if (r.trace.size() >= 2) {
      const double prev = r.trace[r.trace.size() - 2];
      if (std::abs(value - prev) < cfg.tol * std::abs(prev)) break;
    }
    update_local(pts, s);
  }
  r.state = std::move(s);
  return r;
}

}  // namespace

std::string_view to_string(TimeTransform t) {
  return t == TimeTransform::identity ? "identity" : "log1p";
}

TimeTransform time_transform_from_string(std::string_view name) {
  if (name == "identity") return TimeTransform::identity;
  if (name == "log1p") return TimeTransform::log1p;
  throw ConfigError("unknown time transform '" + std::string(name) + "'");
}

double forward_transform(TimeTransform t, double time) {
  return t == TimeTransform::identity ? time : std::log1p(time);
}

double inverse_transform(TimeTransform t, double y) {
  return t == TimeTransform::identity ? y : std::expm1(y);
}

double DpmmModel::density_transformed(double y) const {
  double p = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double d = y - means[k];
    p += weights[k] * std::exp(-0.5 * d * d / variances[k]) /
         std::sqrt(2.0 * std::numbers::pi * variances[k]);
  }
  return p;
}

double DpmmModel::sample_transformed(std::mt19937_64& rng) const {
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  const auto k = pick(rng);
  std::normal_distribution<double> draw(means[k], std::sqrt(variances[k]));
  return draw(rng);
}

std::size_t DpmmModel::dominant_component() const {
  return static_cast<std::size_t>(std::max_element(weights.begin(), weights.end()) -
                                  weights.begin());
}

DpmmModel fit_dpmm(std::span<const double> times, const DpmmConfig& config, std::uint64_t seed) {
  if (times.empty()) throw DomainError("fit_dpmm: no times");
  if (config.truncation < 1) throw ConfigError("fit_dpmm: truncation must be >= 1");
  if (!(config.concentration > 0.0) || !(config.prior_mean_strength > 0.0) ||
      !(config.prior_shape > 0.0)) {
    throw ConfigError("fit_dpmm: prior strengths must be positive");
  }
  std::map<double, double> histogram;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw DomainError("fit_dpmm: non-finite time", static_cast<long>(i));
    if (times[i] < 0.0) throw DomainError("fit_dpmm: negative time", static_cast<long>(i));
    histogram[forward_transform(config.transform, times[i])] += 1.0;
  }

  DpmmModel model;
  model.transform = config.transform;
  if (config.bound_to_observed) model.upper_bound = *std::max_element(times.begin(), times.end());
  if (histogram.size() < 2) {
    model.weights = {1.0};
    model.means = {histogram.begin()->first};
    model.variances = {kDegenerateVariance};
    model.degenerate = true;
    return model;
  }

  Points pts;
  for (const auto& [v, c] : histogram) {
    pts.value.push_back(v);
    pts.count.push_back(c);
    pts.total += c;
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < pts.value.size(); ++i) mean += pts.count[i] * pts.value[i];
  mean /= pts.total;
  double var = 0.0;
  for (std::size_t i = 0; i < pts.value.size(); ++i) {
    var += pts.count[i] * (pts.value[i] - mean) * (pts.value[i] - mean);
  }
  var /= pts.total;

  const Prior prior{config.concentration, mean, config.prior_mean_strength, config.prior_shape,
                    config.prior_shape * var};

  // Several deterministic initializations plus one seeded k-means++ start;
  // the run with the highest final ELBO wins.
  const int K = config.truncation;
  const int distinct = static_cast<int>(pts.value.size());
  std::vector<std::vector<double>> starts;
  for (int k : {1, 2, 3, 5, 8}) {
    if (k <= std::min(K, distinct)) starts.push_back(quantile_centers(pts, k));
  }
  std::mt19937_64 rng(seed);
  starts.push_back(kmeanspp_centers(pts, std::min(K, distinct), rng));

  RunResult best;
  double best_elbo = -std::numeric_limits<double>::infinity();
  for (const auto& centers : starts) {
    auto r = run_cavi(pts, prior, config, kmeans_labels(pts, centers));
    if (r.trace.back() > best_elbo) {
      best_elbo = r.trace.back();
      best = std::move(r);
    }
  }

  const State& s = best.state;
  model.weights.resize(K);
  double remaining = 1.0;
  for (int k = 0; k < K; ++k) {
    const double v = k < K - 1 ? s.g1[k] / (s.g1[k] + s.g2[k]) : 1.0;
    model.weights[k] = remaining * v;
    remaining *= 1.0 - v;
  }
  model.means = s.m;
  model.variances.resize(K);
  for (int k = 0; k < K; ++k) model.variances[k] = s.b[k] / s.a[k];
  model.elbo_trace = std::move(best.trace);
  return model;
}

}  // namespace survsynth
