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

#include "survsynth/cox.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "survsynth/error.hpp"

namespace survsynth {
namespace {

constexpr double kAutoRidge = 1e-6;
constexpr double kAscentSlack = 1e-12;  // relative

std::vector<std::size_t> descending_time_order(std::span<const double> time) {
  std::vector<std::size_t> order(time.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return time[a] > time[b]; });
  return order;
}

void check_inputs(const Eigen::MatrixXd& X, std::span<const double> time,
                  std::span<const int> event) {
  if (static_cast<std::size_t>(X.rows()) != time.size() || time.size() != event.size()) {
    throw LayoutError("fit_cox: design rows, time and event lengths differ");
  }
  if (std::count(event.begin(), event.end(), 1) == 0) {
    throw DomainError("fit_cox: no events in the data");
  }
}

StepFunction breslow_baseline(const Eigen::MatrixXd& X, std::span<const double> time,
                              std::span<const int> event, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd risk = (X * beta).array().exp();
  const auto order = descending_time_order(time);
  // Walk from the latest time down, accumulating the risk set; record
  // increments d / S0 at each event time, then cumulate forward in time.
  std::vector<std::pair<double, double>> increments;
  double s0 = 0.0;
  for (std::size_t k = 0; k < order.size();) {
    const double t = time[order[k]];
    std::size_t d = 0;
    std::size_t j = k;
    for (; j < order.size() && time[order[j]] == t; ++j) {
      s0 += risk(static_cast<Eigen::Index>(order[j]));
      d += event[order[j]] == 1;
    }
    if (d > 0) increments.emplace_back(t, static_cast<double>(d) / s0);
    k = j;
  }
  std::reverse(increments.begin(), increments.end());
  StepFunction h;
  double acc = 0.0;
  for (const auto& [t, inc] : increments) {
    acc += inc;
    h.times.push_back(t);
    h.values.push_back(acc);
  }
  return h;
}

CoxModel newton(const Eigen::MatrixXd& X, std::span<const double> time, std::span<const int> event,
                const CoxConfig& config) {
  const auto p = X.cols();
  CoxModel model;
  model.ridge = config.ridge;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);

  auto penalized = [&](const Eigen::VectorXd& b) {
    auto pl = cox_partial_likelihood(X, time, event, b);
    if (model.ridge > 0.0) {
      pl.value -= 0.5 * model.ridge * b.squaredNorm();
      pl.gradient -= model.ridge * b;
      pl.hessian.diagonal().array() -= model.ridge;
    }
    return pl;
  };

  auto current = penalized(beta);
  int iter = 0;
  for (;; ++iter) {
    const double gnorm = p ? current.gradient.cwiseAbs().maxCoeff() : 0.0;
    if (gnorm < config.tol) break;
    if (iter >= config.max_iters) {
      throw FitError("Cox fit did not converge in " + std::to_string(config.max_iters) +
                         " iterations (score max-norm " + std::to_string(gnorm) + ")",
                     {beta.data(), beta.data() + p}, gnorm);
    }
    Eigen::MatrixXd info = -current.hessian;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.rcond() < 1e-12) {
      if (!model.auto_ridge) {
        model.auto_ridge = true;
        model.ridge += kAutoRidge;
        current = penalized(beta);
        continue;
      }
    }
    const Eigen::VectorXd step = ldlt.solve(current.gradient);
    double scale = 1.0;
    bool improved = false;
    for (int h = 0; h <= config.max_halvings; ++h, scale *= 0.5) {
      const Eigen::VectorXd candidate = beta + scale * step;
      auto next = penalized(candidate);
      // Near the optimum a full Newton step can lose a few ulps of the sum;
      // insisting on strict ascent there stalls the iteration.
      const double slack = kAscentSlack * (1.0 + std::abs(current.value));
      if (std::isfinite(next.value) && next.value >= current.value - slack) {
        beta = candidate;
        current = std::move(next);
        improved = true;
        break;
      }
    }
    if (!improved) {
      throw FitError("Cox fit: step-halving exhausted (score max-norm " + std::to_string(gnorm) +
                         ")",
                     {beta.data(), beta.data() + p}, gnorm);
    }
  }
  model.beta = beta;
  model.iterations = iter;
  model.log_likelihood = current.value;
  return model;
}

}  // namespace

double StepFunction::operator()(double t) const {
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return 0.0;
  return values[static_cast<std::size_t>(it - times.begin()) - 1];
}

PartialLikelihood cox_partial_likelihood(const Eigen::MatrixXd& X, std::span<const double> time,
                                         std::span<const int> event, const Eigen::VectorXd& beta) {
  const auto p = X.cols();
  const Eigen::VectorXd eta = X * beta;
  const auto order = descending_time_order(time);

  PartialLikelihood out;
  out.gradient = Eigen::VectorXd::Zero(p);
  out.hessian = Eigen::MatrixXd::Zero(p, p);
  // Risk-set sums are stored relative to exp(shift), where shift is the
  // largest linear predictor seen so far, so no risk set underflows.
  double shift = -std::numeric_limits<double>::infinity();
  double s0 = 0.0;
  Eigen::VectorXd s1 = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t k = 0; k < order.size();) {
    const double t = time[order[k]];
    std::size_t j = k;
    double d = 0.0;
    Eigen::VectorXd xsum = Eigen::VectorXd::Zero(p);
    double eta_sum = 0.0;
    for (; j < order.size() && time[order[j]] == t; ++j) {
      const auto i = static_cast<Eigen::Index>(order[j]);
      if (eta(i) > shift) {
        const double rescale = std::exp(shift - eta(i));
        s0 *= rescale;
        s1 *= rescale;
        s2.triangularView<Eigen::Lower>() *= rescale;
        shift = eta(i);
      }
      const double w = std::exp(eta(i) - shift);
      const auto xi = X.row(i).transpose();
      s0 += w;
      s1 += w * xi;
      s2.selfadjointView<Eigen::Lower>().rankUpdate(xi, w);
      if (event[order[j]] == 1) {
        d += 1.0;
        xsum += xi;
        eta_sum += eta(i);
      }
    }
    if (d > 0.0) {
      const Eigen::VectorXd mean = s1 / s0;
      out.value += eta_sum - d * (std::log(s0) + shift);
      out.gradient += xsum - d * mean;
      out.hessian.triangularView<Eigen::Lower>() -=
          d * (Eigen::MatrixXd(s2.triangularView<Eigen::Lower>()) / s0 - mean * mean.transpose());
    }
    k = j;
  }
  out.hessian = out.hessian.selfadjointView<Eigen::Lower>();
  return out;
}

CoxModel fit_cox(const Eigen::MatrixXd& X, std::span<const double> time,
                 std::span<const int> event, const CoxConfig& config) {
  check_inputs(X, time, event);
  auto model = newton(X, time, event, config);
  model.active.assign(static_cast<std::size_t>(X.cols()), true);
  model.baseline_cum_hazard = breslow_baseline(X, time, event, model.beta);
  return model;
}

CoxModel fit_cox(const EncodedMatrix& X, std::span<const double> time, std::span<const int> event,
                 const CoxConfig& config) {
  check_inputs(X.values, time, event);
  const auto width = X.values.cols();
  std::vector<bool> active(static_cast<std::size_t>(width), true);
  for (const auto& g : X.layout) {
    if (g.kind == SlotKind::categorical) active[g.offset] = false;
  }
  for (Eigen::Index c = 0; c < width; ++c) {
    const auto col = X.values.col(c);
    if (col.size() == 0 || (col.array() == col(0)).all()) active[static_cast<std::size_t>(c)] = false;
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index c = 0; c < width; ++c) {
    if (active[static_cast<std::size_t>(c)]) keep.push_back(c);
  }
  if (keep.empty()) throw DomainError("fit_cox: design has no non-constant columns");
  Eigen::MatrixXd reduced(X.values.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    reduced.col(static_cast<Eigen::Index>(c)) = X.values.col(keep[c]);
  }
  auto model = newton(reduced, time, event, config);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(width);
  for (std::size_t c = 0; c < keep.size(); ++c) beta(keep[c]) = model.beta(static_cast<Eigen::Index>(c));
  model.beta = beta;
  model.active = std::move(active);
  model.baseline_cum_hazard = breslow_baseline(X.values, time, event, model.beta);
  return model;
}

double predict_risk(const CoxModel& m, const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  if (x.size() != m.beta.size()) {
    throw LayoutError("predict_risk: row has " + std::to_string(x.size()) + " slots, model has " +
                      std::to_string(m.beta.size()));
  }
  return x.dot(m.beta.transpose());
}

Eigen::VectorXd predict_risks(const CoxModel& m, const Eigen::MatrixXd& X) {
  if (X.cols() != m.beta.size()) throw LayoutError("predict_risks: width mismatch");
  return X * m.beta;
}

double predict_survival(const CoxModel& m, const Eigen::Ref<const Eigen::RowVectorXd>& x,
                        double t) {
  const double h0 = m.baseline_cum_hazard(t);
  if (h0 == 0.0) return 1.0;
  return std::exp(-h0 * std::exp(predict_risk(m, x)));
}

double expected_lifetime(const CoxModel& m, const Eigen::Ref<const Eigen::RowVectorXd>& x,
                         double horizon) {
  if (!(horizon > 0.0)) throw DomainError("expected_lifetime: horizon must be positive");
  const double hazard_ratio = std::exp(predict_risk(m, x));
  const auto& h = m.baseline_cum_hazard;
  // Grid: 0, each knot below the horizon (left and right limits), horizon.
  // Between consecutive grid points S is constant, so the trapezoids are exact.
  double area = 0.0;
  double prev_t = 0.0;
  double prev_s = 1.0;
  for (std::size_t k = 0; k < h.times.size() && h.times[k] < horizon; ++k) {
    area += (h.times[k] - prev_t) * prev_s;
    prev_t = h.times[k];
    prev_s = std::exp(-h.values[k] * hazard_ratio);
  }
  area += (horizon - prev_t) * prev_s;
  return area;
}

}  // namespace survsynth
