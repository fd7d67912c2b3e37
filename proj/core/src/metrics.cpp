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

#include "survsynth/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "survsynth/error.hpp"
#include "survsynth/kaplan_meier.hpp"

namespace survsynth {
namespace {

void require_nonempty(const SurvivalDataset& real, const SurvivalDataset& syn) {
  if (real.empty() || syn.empty()) throw DomainError("metric requires non-empty datasets");
}

void require_same_schema(const SurvivalDataset& real, const SurvivalDataset& syn) {
  if (real.cols() != syn.cols()) throw SchemaError("metric: column count mismatch");
  for (std::size_t j = 0; j < real.cols(); ++j) {
    const auto& a = real.column_schema(j);
    const auto& b = syn.column_schema(j);
    if (a.name != b.name || a.kind != b.kind || a.categories != b.categories) {
      throw SchemaError("metric: schema mismatch at column '" + a.name + "'");
    }
  }
}

std::vector<double> curve_on_grid(const SurvivalDataset& ds, const MetricGrid& grid) {
  const auto curve = kaplan_meier(ds.time(), ds.event());
  std::vector<double> s;
  s.reserve(grid.points.size());
  for (double g : grid.points) s.push_back(km_eval(curve, g));
  return s;
}

double js_divergence_base2(std::vector<double> p, std::vector<double> q) {
  auto normalize = [](std::vector<double>& v) {
    double total = 0.0;
    for (auto& x : v) total += (x += kJsSmoothing);
    for (auto& x : v) x /= total;
  };
  normalize(p);
  normalize(q);
  double js = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    js += 0.5 * p[i] * std::log2(p[i] / m) + 0.5 * q[i] * std::log2(q[i] / m);
  }
  return std::max(js, 0.0);
}

// Linear-interpolation quantile of sorted data.
double quantile_linear(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// Inverse empirical CDF.
double quantile_step(const std::vector<double>& sorted, double p) {
  auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size())));
  idx = std::clamp<std::size_t>(idx, 1, sorted.size());
  return sorted[idx - 1];
}

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> out;
  for (double x : v) {
    if (!is_missing(x)) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Fenwick tree over risk ranks.
class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
  void add(std::size_t i) {
    for (++i; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
  }
  // Count of inserted ranks < i.
  std::int64_t prefix(std::size_t i) const {
    std::int64_t s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

 private:
  std::vector<std::int64_t> tree_;
};

}  // namespace

MetricGrid MetricGrid::uniform(double tmax, std::size_t size) {
  if (size < 2) throw DomainError("metric grid needs at least 2 points");
  if (!(tmax > 0.0)) throw DomainError("metric grid horizon must be positive");
  MetricGrid g;
  g.points.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    g.points[i] = tmax * static_cast<double>(i) / static_cast<double>(size - 1);
  }
  g.points.back() = tmax;  // exact endpoint despite rounding
  return g;
}

MetricGrid union_grid(const SurvivalDataset& real, const SurvivalDataset& syn, std::size_t size) {
  require_nonempty(real, syn);
  return MetricGrid::uniform(std::max(real.max_time(), syn.max_time()), size);
}

double km_divergence(const SurvivalDataset& real, const SurvivalDataset& syn,
                     const MetricGrid& grid) {
  require_nonempty(real, syn);
  const auto a = curve_on_grid(real, grid);
  const auto b = curve_on_grid(syn, grid);
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
  return total / static_cast<double>(a.size());
}

double optimism(const SurvivalDataset& real, const SurvivalDataset& syn, const MetricGrid& grid) {
  require_nonempty(real, syn);
  const auto a = curve_on_grid(real, grid);
  const auto b = curve_on_grid(syn, grid);
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += b[i] - a[i];
  return total / static_cast<double>(a.size());
}

double shortsightedness(const SurvivalDataset& real, const SurvivalDataset& syn) {
  require_nonempty(real, syn);
  const double tr = real.max_time();
  if (tr == 0.0) throw DomainError("shortsightedness: real horizon is 0");
  return (tr - syn.max_time()) / tr;
}

double c_index(std::span<const double> risk, std::span<const double> time,
               std::span<const int> event) {
  const std::size_t n = risk.size();
  if (time.size() != n || event.size() != n) throw DomainError("c_index: length mismatch");
  // Dense ranks of the risk scores (exact ties share a rank).
  std::vector<double> levels(risk.begin(), risk.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  auto rank_of = [&](double r) {
    return static_cast<std::size_t>(std::lower_bound(levels.begin(), levels.end(), r) -
                                    levels.begin());
  };

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return time[a] > time[b]; });

  Fenwick later(levels.size());
  std::int64_t inserted = 0;
  std::int64_t comparable = 0;
  std::int64_t twice_concordant = 0;
  for (std::size_t k = 0; k < n;) {
    std::size_t j = k;
    while (j < n && time[order[j]] == time[order[k]]) ++j;
    for (std::size_t m = k; m < j; ++m) {
      const auto i = order[m];
      if (event[i] != 1) continue;
      const auto r = rank_of(risk[i]);
      const auto below = later.prefix(r);
      const auto upto = later.prefix(r + 1);
      comparable += inserted;
      twice_concordant += 2 * below + (upto - below);
    }
    for (std::size_t m = k; m < j; ++m) {
      later.add(rank_of(risk[order[m]]));
      ++inserted;
    }
    k = j;
  }
  if (comparable == 0) throw DomainError("c_index: no comparable pairs");
  return (static_cast<double>(twice_concordant) / 2.0) / static_cast<double>(comparable);
}

double brier_score(std::span<const double> predicted_survival, std::span<const double> time,
                   std::span<const int> event, double t_star) {
  const std::size_t n = time.size();
  if (predicted_survival.size() != n || event.size() != n) {
    throw DomainError("brier_score: length mismatch");
  }
  if (n == 0) throw DomainError("brier_score: empty test set");
  if (!(t_star > 0.0)) throw DomainError("brier_score: t_star must be positive");
  std::vector<int> censored(n);
  for (std::size_t i = 0; i < n; ++i) censored[i] = 1 - event[i];
  const auto g = kaplan_meier(time, censored);
  const double g_star = km_eval(g, t_star);

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = predicted_survival[i];
    if (time[i] > t_star) {
      if (g_star <= 0.0) {
        throw DomainError("brier_score: censoring survival is 0 at t_star; use a smaller t_star");
      }
      total += (1.0 - s) * (1.0 - s) / g_star;
    } else if (event[i] == 1) {
      const double gi = km_eval_left(g, time[i]);
      if (gi <= 0.0) {
        throw DomainError("brier_score: censoring survival is 0 before an event; use a smaller t_star");
      }
      total += s * s / gi;
    }
  }
  return total / static_cast<double>(n);
}

double brier_score(const CoxModel& model, const Encoder& encoder, const SurvivalDataset& test,
                   double t_star) {
  const auto X = encoder.encode(test);
  std::vector<double> s(test.rows());
  for (std::size_t i = 0; i < test.rows(); ++i) {
    s[i] = predict_survival(model, X.values.row(static_cast<Eigen::Index>(i)), t_star);
  }
  return brier_score(s, test.time(), test.event(), t_star);
}

MetricResult js_distance(const SurvivalDataset& real, const SurvivalDataset& syn) {
  require_nonempty(real, syn);
  require_same_schema(real, syn);
  MetricResult r{"js_distance", 0.0, {}};
  if (real.cols() == 0) throw DomainError("js_distance: no covariate columns");
  for (std::size_t j = 0; j < real.cols(); ++j) {
    const auto& schema = real.column_schema(j);
    std::vector<double> p, q;
    if (schema.is_categorical()) {
      p.assign(schema.categories.size(), 0.0);
      q.assign(schema.categories.size(), 0.0);
      for (double v : real.column(j)) {
        if (!is_missing(v)) p[static_cast<std::size_t>(v)] += 1.0;
      }
      for (double v : syn.column(j)) {
        if (!is_missing(v)) q[static_cast<std::size_t>(v)] += 1.0;
      }
    } else {
      const auto sorted = sorted_copy(real.column(j));
      if (sorted.empty()) throw DomainError("js_distance: column '" + schema.name + "' is empty");
      std::vector<double> edges;
      for (std::size_t k = 1; k < kJsBins; ++k) {
        edges.push_back(quantile_linear(sorted, static_cast<double>(k) / kJsBins));
      }
      auto bin = [&](double v) {
        return static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), v) -
                                        edges.begin());
      };
      p.assign(kJsBins, 0.0);
      q.assign(kJsBins, 0.0);
      for (double v : real.column(j)) {
        if (!is_missing(v)) p[bin(v)] += 1.0;
      }
      for (double v : syn.column(j)) {
        if (!is_missing(v)) q[bin(v)] += 1.0;
      }
    }
    const double np = std::accumulate(p.begin(), p.end(), 0.0);
    const double nq = std::accumulate(q.begin(), q.end(), 0.0);
    for (auto& x : p) x /= std::max(np, 1.0);
    for (auto& x : q) x /= std::max(nq, 1.0);
    r.details.push_back(std::sqrt(js_divergence_base2(std::move(p), std::move(q))));
  }
  r.value = std::accumulate(r.details.begin(), r.details.end(), 0.0) /
            static_cast<double>(r.details.size());
  return r;
}

MetricResult ws_distance(const SurvivalDataset& real, const SurvivalDataset& syn) {
  require_nonempty(real, syn);
  require_same_schema(real, syn);
  MetricResult r{"ws_distance", 0.0, {}};
  for (std::size_t j = 0; j < real.cols(); ++j) {
    if (real.column_schema(j).is_categorical()) continue;
    auto a = sorted_copy(real.column(j));
    auto b = sorted_copy(syn.column(j));
    if (a.empty() || b.empty()) throw DomainError("ws_distance: empty column");
    const double lo = a.front();
    const double range = a.back() > a.front() ? a.back() - a.front() : 1.0;
    for (auto& x : a) x = (x - lo) / range;
    for (auto& x : b) x = (x - lo) / range;
    double total = 0.0;
    for (std::size_t i = 0; i < kWsQuantiles; ++i) {
      const double p = (static_cast<double>(i) + 0.5) / kWsQuantiles;
      total += std::abs(quantile_step(a, p) - quantile_step(b, p));
    }
    r.details.push_back(total / kWsQuantiles);
  }
  if (r.details.empty()) throw DomainError("ws_distance: no continuous columns");
  r.value = std::accumulate(r.details.begin(), r.details.end(), 0.0) /
            static_cast<double>(r.details.size());
  return r;
}

DcrResult dcr(const SurvivalDataset& real, const SurvivalDataset& syn) {
  require_nonempty(real, syn);
  require_same_schema(real, syn);
  const auto encoder = Encoder::fit(real, {.include_time = true, .include_event = true});
  // Records as columns so each distance reads contiguous memory.
  const Eigen::MatrixXd R = encoder.encode(real).values.transpose();
  const Eigen::MatrixXd S = encoder.encode(syn).values.transpose();
  std::vector<double> nearest(static_cast<std::size_t>(S.cols()));
  for (Eigen::Index i = 0; i < S.cols(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < R.cols(); ++r) {
      best = std::min(best, (R.col(r) - S.col(i)).squaredNorm());
    }
    nearest[static_cast<std::size_t>(i)] = std::sqrt(best);
  }
  std::sort(nearest.begin(), nearest.end());
  const std::size_t n = nearest.size();
  DcrResult out;
  out.minimum = nearest.front();
  out.median = n % 2 ? nearest[n / 2] : 0.5 * (nearest[n / 2 - 1] + nearest[n / 2]);
  return out;
}

}  // namespace survsynth
