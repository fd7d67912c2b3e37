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

// Cox proportional hazards with Breslow tie handling and the Breslow
// baseline cumulative hazard. S(t | x) = exp(-H0(t) * exp(x . beta)).

#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "survsynth/encoder.hpp"

namespace survsynth {

// Right-continuous step function, 0 before the first knot.
struct StepFunction {
  std::vector<double> times;
  std::vector<double> values;

  double operator()(double t) const;
};

struct CoxConfig {
  int max_iters = 100;
  double tol = 1e-7;    // max-norm of the score
  double ridge = 0.0;   // added to the negative Hessian and as -ridge/2 |beta|^2
  int max_halvings = 30;
};

struct CoxModel {
  Eigen::VectorXd beta;  // one entry per encoded slot; dropped slots are 0
  StepFunction baseline_cum_hazard;
  std::vector<bool> active;  // slots that entered the fit
  double ridge = 0.0;        // ridge actually used
  bool auto_ridge = false;   // set when the Hessian was singular and 1e-6 was added
  int iterations = 0;
  double log_likelihood = 0.0;
};

struct PartialLikelihood {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

// Breslow partial log-likelihood with analytic score and Hessian.
PartialLikelihood cox_partial_likelihood(const Eigen::MatrixXd& X, std::span<const double> time,
                                         std::span<const int> event, const Eigen::VectorXd& beta);

// Newton-Raphson with step-halving on a plain design matrix. All columns
// enter the fit.
CoxModel fit_cox(const Eigen::MatrixXd& X, std::span<const double> time,
                 std::span<const int> event, const CoxConfig& config = {});

// Fit on an encoded matrix. The first slot of every categorical group is
// the reference level and constant slots are dropped; their coefficients
// are 0 so the model applies directly to full encoded rows.
CoxModel fit_cox(const EncodedMatrix& X, std::span<const double> time, std::span<const int> event,
                 const CoxConfig& config = {});

// Linear predictor x . beta, for one row or for every row of X.
double predict_risk(const CoxModel& m, const Eigen::Ref<const Eigen::RowVectorXd>& x);
Eigen::VectorXd predict_risks(const CoxModel& m, const Eigen::MatrixXd& X);
double predict_survival(const CoxModel& m, const Eigen::Ref<const Eigen::RowVectorXd>& x, double t);
// Area under S(t | x) on [0, horizon], integrated exactly over the baseline
// step grid (trapezoids between each knot's left and right limits).
double expected_lifetime(const CoxModel& m, const Eigen::Ref<const Eigen::RowVectorXd>& x,
                         double horizon);

}  // namespace survsynth
