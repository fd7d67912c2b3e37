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

#include <doctest.h>

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "survsynth/cox.hpp"
#include "survsynth/encoder.hpp"
#include "survsynth/error.hpp"
#include "survsynth/kaplan_meier.hpp"

using namespace survsynth;

namespace {

struct CoxProblem {
  Eigen::MatrixXd X;
  std::vector<double> time;
  std::vector<int> event;
};

// Exponential PH data with integer-rounded times (>= 1) so ties occur.
CoxProblem cox_problem(std::size_t n, int p, std::uint64_t seed, double effect = 0.7) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CoxProblem pr{Eigen::MatrixXd(static_cast<Eigen::Index>(n), p), std::vector<double>(n),
                std::vector<int>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    double lp = 0.0;
    for (int j = 0; j < p; ++j) {
      pr.X(static_cast<Eigen::Index>(i), j) = g(rng);
      lp += (j % 2 == 0 ? effect : -effect / 2) * pr.X(static_cast<Eigen::Index>(i), j);
    }
    const double t = -std::log(u(rng)) / std::exp(lp) * 10.0;
    const double c = -std::log(u(rng)) * 15.0;
    pr.time[i] = std::max(1.0, std::round(std::min(t, c)));
    pr.event[i] = t <= c ? 1 : 0;
  }
  pr.event[0] = 1;
  return pr;
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8}); }

}  // namespace

TEST_SUITE("survival_estimators") {

TEST_CASE("kaplan_meier examples") {
  SUBCASE("three rows") {
    const auto km = kaplan_meier(std::vector<double>{1, 2, 3}, std::vector<int>{1, 0, 1});
    REQUIRE(km.event_times == std::vector<double>{1, 3});
    // Exact means the same floating-point product as the hand calculation.
    const double s1 = 1.0 - 1.0 / 3.0;
    CHECK(s1 == doctest::Approx(2.0 / 3.0));
    CHECK(km.survival[0] == s1);
    CHECK(km.survival[1] == 0.0);
    CHECK(km_eval(km, 1.0) == s1);
    CHECK(km_eval(km, 2.0) == s1);
    CHECK(km_eval(km, 3.0) == 0.0);
    CHECK(km_eval(km, 1.5) == s1);
    CHECK(km_eval(km, 0.0) == 1.0);
    CHECK(km_eval(km, 100.0) == 0.0);
    CHECK(km_eval_left(km, 1.0) == 1.0);
    CHECK(km.n_at_risk == std::vector<std::size_t>{3, 1});
  }
  SUBCASE("six rows with a tie between an event and a censoring") {
    const auto km = kaplan_meier(std::vector<double>{1, 2, 2, 3, 4, 5},
                                 std::vector<int>{1, 1, 0, 1, 0, 1});
    REQUIRE(km.event_times == std::vector<double>{1, 2, 3, 5});
    double s = 1.0;
    s *= 1.0 - 1.0 / 6.0;
    CHECK(km.survival[0] == s);
    CHECK(s == doctest::Approx(5.0 / 6.0));
    s *= 1.0 - 1.0 / 5.0;
    CHECK(km.survival[1] == s);
    CHECK(s == doctest::Approx(2.0 / 3.0));
    s *= 1.0 - 1.0 / 3.0;
    CHECK(km.survival[2] == s);
    CHECK(s == doctest::Approx(4.0 / 9.0));
    CHECK(km.survival[3] == 0.0);
    CHECK(km.n_at_risk == std::vector<std::size_t>{6, 5, 3, 1});
  }
  SUBCASE("all censored") {
    const auto km = kaplan_meier(std::vector<double>{1, 2, 3}, std::vector<int>{0, 0, 0});
    CHECK(km.event_times.empty());
    CHECK(km_eval(km, 0.0) == 1.0);
    CHECK(km_eval(km, 50.0) == 1.0);
  }
  SUBCASE("single event") {
    const auto km = kaplan_meier(std::vector<double>{5}, std::vector<int>{1});
    CHECK(km_eval(km, 5.0) == 0.0);
    CHECK(km_eval(km, 4.999) == 1.0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(kaplan_meier(std::vector<double>{}, std::vector<int>{}), DomainError);
    CHECK_THROWS_AS(kaplan_meier(std::vector<double>{-1.0}, std::vector<int>{1}), DomainError);
  }
}

TEST_CASE("invariant: KM is non-increasing and matches the ECDF without censoring") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> ti(0, 20);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial * 3;
    std::vector<double> t(n);
    std::vector<int> e(n), all(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = ti(rng);
      e[i] = (i + trial) % 3 != 0;
    }
    const auto km = kaplan_meier(t, e);
    for (std::size_t k = 0; k < km.survival.size(); ++k) {
      CHECK(km.survival[k] >= 0.0);
      CHECK(km.survival[k] <= 1.0);
      if (k > 0) CHECK(km.survival[k] <= km.survival[k - 1]);
      if (k > 0) CHECK(km.event_times[k] > km.event_times[k - 1]);
    }
    if (!km.event_times.empty()) CHECK(km_eval(km, km.event_times[0] - 0.5) == 1.0);

    const auto full = kaplan_meier(t, all);
    for (std::size_t k = 0; k < full.event_times.size(); ++k) {
      const double le = static_cast<double>(std::count_if(
          t.begin(), t.end(), [&](double v) { return v <= full.event_times[k]; }));
      CHECK(full.survival[k] == doctest::Approx(1.0 - le / n).epsilon(1e-12));
    }
  }
}

TEST_CASE("Cox partial likelihood derivatives match finite differences") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto pr = cox_problem(50, 3, seed);
    std::mt19937_64 rng(seed + 100);
    std::normal_distribution<double> g(0.0, 0.5);
    Eigen::VectorXd beta(3);
    for (int j = 0; j < 3; ++j) beta[j] = g(rng);
    const auto pl = cox_partial_likelihood(pr.X, pr.time, pr.event, beta);
    const double h = 1e-5;
    for (int j = 0; j < 3; ++j) {
      Eigen::VectorXd up = beta, down = beta;
      up[j] += h;
      down[j] -= h;
      const auto a = cox_partial_likelihood(pr.X, pr.time, pr.event, up);
      const auto b = cox_partial_likelihood(pr.X, pr.time, pr.event, down);
      CHECK(rel(pl.gradient[j], (a.value - b.value) / (2 * h)) < 1e-5);
      for (int k = 0; k < 3; ++k) {
        CHECK(rel(pl.hessian(k, j), (a.gradient[k] - b.gradient[k]) / (2 * h)) < 1e-5);
      }
    }
  }
}

TEST_CASE("Cox fit agrees with a grid search") {
  Eigen::MatrixXd X(10, 1);
  X << 0.5, -1.2, 0.3, 2.0, -0.7, 1.1, -0.2, 0.9, -1.5, 0.1;
  const std::vector<double> t{3, 5, 2, 1, 7, 2, 6, 4, 9, 5};
  const std::vector<int> e{1, 0, 1, 1, 1, 1, 0, 1, 1, 1};
  const auto m = fit_cox(X, t, e);
  double best = -1e300, arg = 0.0;
  for (int k = -5000; k <= 5000; ++k) {
    Eigen::VectorXd b(1);
    b[0] = k * 0.001;
    const double v = cox_partial_likelihood(X, t, e, b).value;
    if (v > best) {
      best = v;
      arg = b[0];
    }
  }
  CHECK(std::abs(m.beta[0] - arg) <= 0.002);
  CHECK(m.log_likelihood == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("Cox fit on pure noise gives a small coefficient") {
  auto pr = cox_problem(500, 1, 42, 0.0);
  const auto m = fit_cox(pr.X, pr.time, pr.event);
  CHECK(std::abs(m.beta[0]) < 0.2);
}

TEST_CASE("Cox errors") {
  auto pr = cox_problem(30, 2, 1);
  std::fill(pr.event.begin(), pr.event.end(), 0);
  CHECK_THROWS_AS(fit_cox(pr.X, pr.time, pr.event), DomainError);

  // Perfect separation: the likelihood keeps rising as beta grows.
  Eigen::MatrixXd X(6, 1);
  X << 3, 2, 1, 0, -1, -2;
  const std::vector<double> t{1, 2, 3, 4, 5, 6};
  const std::vector<int> e{1, 1, 1, 1, 1, 1};
  CoxConfig cfg;
  cfg.max_iters = 3;
  try {
    fit_cox(X, t, e, cfg);
    FAIL("expected FitError");
  } catch (const FitError& err) {
    CHECK(err.last_beta().size() == 1);
    CHECK(err.gradient_norm() > 0.0);
  }
}

TEST_CASE("partial likelihood stays finite for extreme coefficients") {
  // Late risk sets sit hundreds of units below the largest linear predictor.
  Eigen::MatrixXd X(6, 1);
  X << 3, 2, 1, 0, -1, -2;
  const std::vector<double> t{1, 2, 3, 4, 5, 6};
  const std::vector<int> e{1, 1, 1, 1, 1, 0};
  Eigen::VectorXd beta(1);
  beta << 400.0;
  const auto pl = cox_partial_likelihood(X, t, e, beta);
  CHECK(std::isfinite(pl.value));
  CHECK(std::isfinite(pl.gradient[0]));
  CHECK(std::isfinite(pl.hessian(0, 0)));
  CHECK(pl.value <= 0.0);
}

TEST_CASE("invariant: Cox likelihood never decreases across Newton iterates") {
  // Convergence from zero reaches a likelihood at least as high as any
  // smaller iteration budget.
  const auto pr = cox_problem(200, 3, 7);
  const auto full = fit_cox(pr.X, pr.time, pr.event);
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
  const double start = cox_partial_likelihood(pr.X, pr.time, pr.event, zero).value;
  double prev = start;
  for (int iters = 1; iters <= full.iterations; ++iters) {
    CoxConfig cfg;
    cfg.max_iters = iters;
    try {
      const auto m = fit_cox(pr.X, pr.time, pr.event, cfg);
      CHECK(m.log_likelihood >= prev - 1e-9 * (1 + std::abs(prev)));
      prev = m.log_likelihood;
    } catch (const FitError& err) {
      Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(err.last_beta().data(), 3);
      const double v = cox_partial_likelihood(pr.X, pr.time, pr.event, b).value;
      CHECK(v >= prev - 1e-9 * (1 + std::abs(prev)));
      prev = v;
    }
  }
  CHECK(full.log_likelihood >= start);
}

TEST_CASE("predict_risk examples") {
  const auto pr = cox_problem(150, 2, 3);
  auto m = fit_cox(pr.X, pr.time, pr.event);
  SUBCASE("null model") {
    CoxModel null = m;
    null.beta.setZero();
    CHECK((predict_risks(null, pr.X).array() == 0.0).all());
  }
  SUBCASE("doubling beta preserves order") {
    CoxModel twice = m;
    twice.beta *= 2.0;
    const Eigen::VectorXd a = predict_risks(m, pr.X), b = predict_risks(twice, pr.X);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      CHECK(b[i] == doctest::Approx(2.0 * a[i]).epsilon(1e-12));
      for (Eigen::Index k = 0; k < a.size(); k += 17) CHECK((a[i] < a[k]) == (b[i] < b[k]));
    }
  }
  SUBCASE("shifting a raw covariate is absorbed by the encoder") {
    const auto ds = testing::random_dataset(200, 2, 1, 9);
    auto shifted_cols = ds.columns();
    for (auto& v : shifted_cols[0]) v += 1000.0;
    const auto shifted = ds.with_columns(shifted_cols, {ds.time().begin(), ds.time().end()},
                                          {ds.event().begin(), ds.event().end()});
    const auto ea = Encoder::fit(ds).encode(ds);
    const auto eb = Encoder::fit(shifted).encode(shifted);
    const auto ma = fit_cox(ea, ds.time(), ds.event());
    const auto mb = fit_cox(eb, shifted.time(), shifted.event());
    const Eigen::VectorXd ra = predict_risks(ma, ea.values), rb = predict_risks(mb, eb.values);
    CHECK((ra - rb).cwiseAbs().maxCoeff() < 1e-6);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(predict_risks(m, Eigen::MatrixXd::Zero(3, 5)), LayoutError);
  }
}

TEST_CASE("invariant: rescaling a covariate rescales its coefficient") {
  auto pr = cox_problem(300, 2, 11);
  const auto base = fit_cox(pr.X, pr.time, pr.event);
  for (const double a : {0.1, 3.0, 25.0}) {
    Eigen::MatrixXd Xs = pr.X;
    Xs.col(0) *= a;
    const auto m = fit_cox(Xs, pr.time, pr.event);
    CHECK(std::abs(m.beta[0] - base.beta[0] / a) < 1e-4);
    CHECK(std::abs(m.beta[1] - base.beta[1]) < 1e-4);
  }
}

TEST_CASE("invariant: Cox survival curves and expected lifetime") {
  const auto pr = cox_problem(250, 2, 5);
  const auto m = fit_cox(pr.X, pr.time, pr.event);
  const auto& H = m.baseline_cum_hazard;
  CHECK(H(0.0) == 0.0);
  for (std::size_t k = 1; k < H.values.size(); ++k) CHECK(H.values[k] >= H.values[k - 1]);
  const double horizon = H.times.back() * 1.2;

  for (Eigen::Index i = 0; i < 25; ++i) {
    const Eigen::RowVectorXd x = pr.X.row(i);
    CHECK(predict_survival(m, x, 0.0) == 1.0);
    double prev = 1.0;
    for (double t = 0; t <= horizon; t += horizon / 200) {
      const double s = predict_survival(m, x, t);
      CHECK(s >= 0.0);
      CHECK(s <= prev);
      prev = s;
    }
    const Eigen::RowVectorXd y = pr.X.row(i + 25);
    const bool x_riskier = predict_risk(m, x) > predict_risk(m, y);
    for (double t : H.times) {
      if (H(t) <= 0.0 || predict_risk(m, x) == predict_risk(m, y)) continue;
      CHECK((predict_survival(m, x, t) < predict_survival(m, y, t)) == x_riskier);
    }

    const double life = expected_lifetime(m, x, horizon);
    CHECK(life >= 0.0);
    CHECK(life <= horizon);
    const int steps = 10000;
    const double h = horizon / steps;
    double riemann = 0.0;
    for (int k = 0; k < steps; ++k) riemann += predict_survival(m, x, (k + 0.5) * h) * h;
    CHECK(rel(life, riemann) < 1e-3);
  }

  CoxModel null = m;
  null.beta.setZero();
  null.baseline_cum_hazard = StepFunction{{1.0}, {0.0}};
  CHECK(expected_lifetime(null, pr.X.row(0), 42.0) == doctest::Approx(42.0).epsilon(1e-14));
  CHECK_THROWS_AS(expected_lifetime(m, pr.X.row(0), 0.0), DomainError);
}

}  // TEST_SUITE
