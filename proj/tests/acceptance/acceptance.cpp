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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <sys/wait.h>

#include <Eigen/Core>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "../support/gradcheck.hpp"
#include "../support/simulate.hpp"
#include "survsynth/benchmark.hpp"
#include "survsynth/cox.hpp"
#include "survsynth/csv.hpp"
#include "survsynth/cvae.hpp"
#include "survsynth/dpmm.hpp"
#include "survsynth/event_time.hpp"
#include "survsynth/folds.hpp"
#include "survsynth/generator.hpp"
#include "survsynth/kaplan_meier.hpp"
#include "survsynth/metrics.hpp"
#include "survsynth/smote.hpp"

using namespace survsynth;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// ---------------------------------------------------------------------------

Outcome c_index_oracle() {
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<int> size(2, 500), ti(0, 60), ri(0, 40);
  std::uniform_real_distribution<double> censor_rate(0.0, 0.9);
  const auto start = Clock::now();
  int matched = 0, instances = 0;
  while (instances < 100) {
    const std::size_t n = static_cast<std::size_t>(size(rng));
    std::bernoulli_distribution censored(censor_rate(rng));
    std::vector<double> t(n), risk(n);
    std::vector<int> e(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = ti(rng);
      e[i] = censored(rng) ? 0 : 1;
      risk[i] = instances % 2 == 0 ? ri(rng) : std::normal_distribution<double>()(rng);
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (e[i] != 1) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (!(t[i] < t[j])) continue;
        den += 1.0;
        num += risk[i] > risk[j] ? 1.0 : (risk[i] == risk[j] ? 0.5 : 0.0);
      }
    }
    if (den == 0.0) continue;  // no comparable pair; redraw
    ++instances;
    matched += c_index(risk, t, e) == num / den;
  }
  const double secs = seconds_since(start);
  return {matched == 100 && secs < 5.0,
          std::to_string(matched) + "/100 exact matches in " + fmt(secs, 3) + " s"};
}

Outcome km_examples() {
  const auto three = kaplan_meier(std::vector<double>{1, 2, 3}, std::vector<int>{1, 0, 1});
  // Hand values use the same floating-point products as the estimator.
  const double r1 = 1.0 - 1.0 / 3.0;
  bool ok = three.event_times == std::vector<double>{1, 3} && km_eval(three, 1) == r1 &&
            km_eval(three, 2) == r1 && km_eval(three, 3) == 0.0;
  const auto six = kaplan_meier(std::vector<double>{1, 2, 2, 3, 4, 5},
                                std::vector<int>{1, 1, 0, 1, 0, 1});
  const double s1 = 1.0 - 1.0 / 6.0;
  const double s2 = s1 * (1.0 - 1.0 / 5.0);
  const double s3 = s2 * (1.0 - 1.0 / 3.0);
  ok = ok && six.event_times == std::vector<double>{1, 2, 3, 5} && km_eval(six, 1) == s1 &&
       km_eval(six, 2) == s2 && km_eval(six, 3) == s3 && km_eval(six, 4) == s3 &&
       km_eval(six, 5) == 0.0;
  return {ok, "3-row S = {2/3, 2/3, 0}; 6-row S = {5/6, 2/3, 4/9, 4/9, 0}"};
}

double rel_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-12});
}

Outcome gradient_checks() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 1e-5;

  double worst_cox = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 50, p = 3;
    Eigen::MatrixXd X(n, p);
    std::vector<double> t(n);
    std::vector<int> e(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) X(i, j) = g(rng);
      t[static_cast<std::size_t>(i)] = std::round(10 * u(rng));
      e[static_cast<std::size_t>(i)] = u(rng) < 0.7;
    }
    e[0] = 1;
    Eigen::VectorXd beta(p);
    for (Eigen::Index j = 0; j < p; ++j) beta[j] = 0.5 * g(rng);
    const auto pl = cox_partial_likelihood(X, t, e, beta);
    Eigen::VectorXd fd_grad(p);
    Eigen::MatrixXd fd_hess(p, p);
    for (Eigen::Index j = 0; j < p; ++j) {
      Eigen::VectorXd up = beta, down = beta;
      up[j] += h;
      down[j] -= h;
      const auto a = cox_partial_likelihood(X, t, e, up);
      const auto b = cox_partial_likelihood(X, t, e, down);
      fd_grad[j] = (a.value - b.value) / (2 * h);
      fd_hess.col(j) = (a.gradient - b.gradient) / (2 * h);
    }
    worst_cox = std::max(worst_cox, rel_err(pl.gradient, fd_grad));
    const Eigen::Map<const Eigen::VectorXd> ha(pl.hessian.data(), p * p), hf(fd_hess.data(), p * p);
    worst_cox = std::max(worst_cox, rel_err(ha, hf));
  }

  const auto cvae = testing::cvae_gradient_check(20, h, 8);
  const double worst_cvae = cvae.worst_error;
  return {worst_cox < 1e-5 && worst_cvae < 1e-4 && cvae.trials == 20,
          "worst relative error: Cox " + fmt(worst_cox, 3) + " (20 trials), CVAE ELBO " +
              fmt(worst_cvae, 3) + " (" + std::to_string(cvae.trials) + " trials, " +
              std::to_string(cvae.kink_redraws) + " redrawn: activation kink inside the step)"};
}

// Everything criteria 4, 5 and 7 share for one dataset.
struct DatasetRun {
  testing::NamedDataset data;
  EventTimeSampler sampler;
  GeneratorHandle conditional;
};

DatasetRun fit_dataset(const fs::path& data_dir, const std::string& name, std::uint64_t seed) {
  DatasetRun r{testing::public_or_simulated(data_dir, name, seed), {}, {}};
  const auto& ds = r.data.data;
  r.sampler = fit_event_time_sampler(ds, SamplerMode::dpmm, {}, seed + 1);
  r.conditional = fit_generator(ds, GeneratorKind::conditional_cvae, {}, seed + 2);
  return r;
}

std::string tag(const testing::NamedDataset& d) {
  return d.name + (d.simulated ? " [simulated stand-in]" : "");
}

Outcome conditioning_guarantee(const fs::path& data_dir) {
  const auto named = testing::public_or_simulated(data_dir, "gbsg", 41);
  const auto folds = stratified_kfold(named.data.event(), 3, 0);
  const auto train = named.data.subset(folds[0].train);
  const auto gen = fit_generator(train, GeneratorKind::conditional_cvae, {}, 5);

  std::set<std::pair<double, int>> support;
  for (std::size_t i = 0; i < train.rows(); ++i) support.emplace(train.time()[i], train.event()[i]);
  const auto grid = [&](const SurvivalDataset& syn) { return union_grid(train, syn); };

  const auto empirical = fit_event_time_sampler(train, SamplerMode::empirical, {}, 6);
  std::mt19937_64 rng(7);
  const auto syn_e = generate(gen, empirical, train.rows(), rng);
  std::size_t outside = 0;
  for (std::size_t i = 0; i < syn_e.rows(); ++i) {
    outside += support.count({syn_e.time()[i], syn_e.event()[i]}) == 0;
  }
  const double kd_e = km_divergence(train, syn_e, grid(syn_e));

  const auto dpmm = fit_event_time_sampler(train, SamplerMode::dpmm, {}, 6);
  const auto syn_d = generate(gen, dpmm, train.rows(), rng);
  const double kd_d = km_divergence(train, syn_d, grid(syn_d));

  return {outside == 0 && kd_e <= 0.02 && kd_d <= 0.05,
          tag(named) + ", N=" + std::to_string(train.rows()) + ": " + std::to_string(outside) +
              " pairs outside training support; KM divergence empirical " + fmt(kd_e) +
              " (<= 0.02), DPMM " + fmt(kd_d) + " (<= 0.05)"};
}

Outcome ordering_property(std::vector<DatasetRun>& runs) {
  int wins = 0;
  std::string detail;
  for (auto& r : runs) {
    const auto& ds = r.data.data;
    const auto unconditional = fit_generator(ds, GeneratorKind::unconditional_cvae, {}, 12);
    std::mt19937_64 rng_c(31), rng_u(31);
    const auto syn_c = generate(r.conditional, r.sampler, ds.rows(), rng_c);
    const auto syn_u = generate(unconditional, r.sampler, ds.rows(), rng_u);
    const auto gc = union_grid(ds, syn_c), gu = union_grid(ds, syn_u);
    const double kd_c = km_divergence(ds, syn_c, gc), kd_u = km_divergence(ds, syn_u, gu);
    const double op_c = std::abs(optimism(ds, syn_c, gc)), op_u = std::abs(optimism(ds, syn_u, gu));
    const bool win = kd_c < kd_u && op_c < op_u;
    wins += win;
    // Context only: the same generator fed bootstrap (t, e) draws instead of DPMM draws.
    const auto empirical = fit_event_time_sampler(ds, SamplerMode::empirical, {}, 13);
    std::mt19937_64 rng_e(31);
    const auto syn_e = generate(r.conditional, empirical, ds.rows(), rng_e);
    const double kd_e = km_divergence(ds, syn_e, union_grid(ds, syn_e));
    detail += (detail.empty() ? "" : "; ") + tag(r.data) + " KM " + fmt(kd_c) + " vs " + fmt(kd_u) +
              ", |opt| " + fmt(op_c) + " vs " + fmt(op_u) + (win ? " (lower)" : " (not lower)") +
              " [empirical-sampler KM " + fmt(kd_e) + "]";
  }
  return {wins >= 2, std::to_string(wins) + "/3 datasets with DPMM-sampled (t, e): " + detail};
}

Outcome real_reference(const fs::path& data_dir) {
  struct Band {
    std::string name;
    double lo, hi;
  };
  bool ok = true;
  std::string detail;
  for (const Band& b : {Band{"gbsg", 0.65, 0.72}, Band{"flchain", 0.84, 0.90}}) {
    if (!detail.empty()) detail += "; ";
    const auto ds = testing::load_public(data_dir, b.name);
    if (!ds) {
      ok = false;
      detail += b.name + ": " + (data_dir / (b.name + ".csv")).string() + " not available";
      continue;
    }
    BenchConfig cfg;
    cfg.generator = BenchGenerator::real;
    cfg.seeds = {1};
    cfg.metrics = {"c_index"};
    const auto start = Clock::now();
    const auto report = run_tstr(*ds, cfg);
    const double secs = seconds_since(start);
    const double c = report.aggregates.at("c_index").mean;
    ok = ok && c >= b.lo && c <= b.hi && secs < 60.0;
    detail += b.name + " C-index " + fmt(c) + " in [" + fmt(b.lo) + ", " + fmt(b.hi) + "], " +
              fmt(secs, 3) + " s";
  }
  return {ok, detail};
}

Outcome privacy_behaviour(std::vector<DatasetRun>& runs) {
  bool ok = true;
  std::string detail;
  for (auto& r : runs) {
    const auto& ds = r.data.data;
    std::mt19937_64 rng_s(51), rng_c(51);
    const auto smote = smote_generate(ds, {}, ds.rows(), rng_s);
    const auto syn_c = generate(r.conditional, r.sampler, ds.rows(), rng_c);
    const double d_s = dcr(ds, smote).minimum, d_c = dcr(ds, syn_c).minimum;
    ok = ok && d_s < 1e-2 && d_c > d_s;
    detail += (detail.empty() ? "" : "; ") + tag(r.data) + " min DCR SMOTE " + fmt(d_s, 3) +
              ", CVAE " + fmt(d_c, 3);
  }
  return {ok, detail};
}

Outcome dpmm_recovery() {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> a(2.0, 0.5), b(8.0, 0.5);
  std::bernoulli_distribution pick(0.5);
  std::vector<double> t(2000);
  for (auto& v : t) v = std::max(0.0, pick(rng) ? a(rng) : b(rng));
  DpmmConfig cfg;
  cfg.transform = TimeTransform::identity;
  const auto start = Clock::now();
  const auto m = fit_dpmm(t, cfg, 1);
  const double secs = seconds_since(start);
  std::vector<std::size_t> order(m.weights.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return m.weights[x] > m.weights[y]; });
  std::size_t lo = order[0], hi = order[1];
  if (m.means[lo] > m.means[hi]) std::swap(lo, hi);
  bool monotone = true;
  for (std::size_t i = 1; i < m.elbo_trace.size(); ++i) {
    monotone = monotone && m.elbo_trace[i] >= m.elbo_trace[i - 1] - 1e-6;
  }
  const bool ok = std::abs(m.means[lo] - 2.0) < 0.2 && std::abs(m.means[hi] - 8.0) < 0.2 &&
                  std::abs(m.weights[lo] - 0.5) < 0.1 && std::abs(m.weights[hi] - 0.5) < 0.1 &&
                  monotone && secs < 10.0;
  return {ok, "means " + fmt(m.means[lo]) + ", " + fmt(m.means[hi]) + "; weights " +
                  fmt(m.weights[lo]) + ", " + fmt(m.weights[hi]) + "; ELBO " +
                  (monotone ? "non-decreasing" : "DECREASED") + "; " + fmt(secs, 3) + " s"};
}

Outcome invariant_suites(const fs::path& tmp) {
  const auto log = tmp / "invariants.log";
  const int code = run_command(std::string("\"") + SURVSYNTH_UNIT_TESTS +
                               "\" --test-case=invariant:* >\"" + log.string() + "\" 2>&1");
  const std::string text = slurp(log);
  std::string summary = "exit code " + std::to_string(code);
  const auto pos = text.find("[doctest] test cases:");
  if (pos != std::string::npos) summary += "; " + text.substr(pos + 10, text.find('\n', pos) - pos - 10);
  return {code == 0, summary};
}

Outcome benchmark_determinism(const fs::path& data_dir, const fs::path& tmp) {
  const auto named = testing::public_or_simulated(data_dir, "gbsg", 41);
  save_csv(tmp / "bench_data.csv", named.data);
  std::ofstream(tmp / "bench_schema.json") << schema_config_to_json(schema_config_from(named.data));
  std::ofstream(tmp / "bench_config.json") << "{}\n";  // default protocol
  const auto start = Clock::now();
  int codes = 0;
  for (const char* out : {"report_a.json", "report_b.json"}) {
    const std::string cmd = std::string("\"") + SURVSYNTH_CLI + "\" benchmark --data \"" +
                            (tmp / "bench_data.csv").string() + "\" --schema \"" +
                            (tmp / "bench_schema.json").string() + "\" --config \"" +
                            (tmp / "bench_config.json").string() + "\" --out \"" +
                            (tmp / out).string() + "\" >/dev/null 2>&1";
    codes += run_command(cmd) != 0;
  }
  const double secs = seconds_since(start);
  const std::string a = slurp(tmp / "report_a.json"), b = slurp(tmp / "report_b.json");
  const bool same = codes == 0 && !a.empty() && a == b;
  return {same, tag(named) + ", default config (3 folds x 5 seeds): reports " +
                    (same ? "byte-identical" : "DIFFER") + " (" + std::to_string(a.size()) +
                    " bytes), two runs took " + fmt(secs, 3) + " s"};
}

}  // namespace

int main() {
  const fs::path data_dir = SURVSYNTH_DATA_DIR;
  const fs::path tmp = fs::path(SURVSYNTH_TEST_TMP) / "acceptance";
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  int failures = 0;
  auto report = [&](int id, const std::string& title, const std::function<Outcome()>& check) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << title << ": " << o.detail
              << std::endl;
  };

  std::vector<DatasetRun> runs;
  auto shared = [&]() {
    if (runs.empty()) {
      for (const auto& [name, seed] : {std::pair<std::string, std::uint64_t>{"gbsg", 41},
                                       {"flchain", 42}, {"aids", 43}}) {
        runs.push_back(fit_dataset(data_dir, name, seed));
      }
    }
    return &runs;
  };

  report(1, "C-index equals the pair-enumeration oracle", c_index_oracle);
  report(2, "Kaplan-Meier worked examples", km_examples);
  report(3, "Cox and CVAE gradients match finite differences", gradient_checks);
  report(4, "conditioning guarantee", [&] { return conditioning_guarantee(data_dir); });
  report(5, "conditional beats unconditional on KM divergence and |optimism|",
         [&] { return ordering_property(*shared()); });
  report(6, "Cox on real GBSG and FLCHAIN within reference bands",
         [&] { return real_reference(data_dir); });
  report(7, "SMOTE has the lowest minimum DCR", [&] { return privacy_behaviour(*shared()); });
  report(8, "DPMM recovers a two-component mixture", dpmm_recovery);
  report(9, "invariant property suites", [&] { return invariant_suites(tmp); });
  report(10, "benchmark reports are byte-identical across runs",
         [&] { return benchmark_determinism(data_dir, tmp); });

  std::cout << (10 - failures) << "/10 criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
