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

// survsynth command-line tool.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data or domain
// error, 3 fitting or other runtime error.

#include <CLI11.hpp>
#include <iostream>
#include <set>
#include <sstream>

#include "survsynth/benchmark.hpp"
#include "survsynth/csv.hpp"
#include "survsynth/error.hpp"
#include "survsynth/generator.hpp"
#include "survsynth/impute.hpp"
#include "survsynth/io.hpp"
#include "survsynth/kaplan_meier.hpp"
#include "survsynth/metrics.hpp"
#include "survsynth/report.hpp"
#include "survsynth/seed.hpp"
#include "survsynth/serialization.hpp"

namespace {

using namespace survsynth;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRuntime = 3;

// Raised for flag combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SurvivalDataset load_dataset(const std::string& data, const std::string& schema) {
  const SurvivalDataset ds = load_csv(data, load_schema_config(schema));
  return ds.has_missing() ? impute_missing(ds) : ds;
}

struct FitArgs {
  std::string data, schema, out, config;
  std::string sampler = "dpmm";
  std::string generator = "cvae";
  std::vector<std::string> strata;
  std::uint64_t seed = 0;
};

int cmd_fit(const FitArgs& a) {
  const SurvivalDataset ds = load_dataset(a.data, a.schema);
  GeneratorOptions gen_opts;
  DpmmConfig dpmm;
  if (!a.config.empty()) {
    const auto j = parse_json(read_text_file(a.config));
    for (const auto& [key, _] : j.items()) {
      if (key != "cvae" && key != "dpmm" && key != "smote_k") {
        throw ConfigError("unknown fit option '" + key + "' (expected cvae, dpmm, smote_k)");
      }
    }
    if (j.contains("cvae")) gen_opts.cvae = cvae_config_from_json(j.at("cvae"));
    if (j.contains("dpmm")) dpmm = dpmm_config_from_json(j.at("dpmm"));
    if (j.contains("smote_k")) gen_opts.smote_k = j.at("smote_k").get<int>();
  }
  const SamplerMode mode = sampler_mode_from_string(a.sampler);
  const GeneratorKind kind = generator_kind_from_string(a.generator);

  ModelBundle bundle;
  bundle.schema = schema_config_from(ds);
  bundle.schema.missing_tokens = load_schema_config(a.schema).missing_tokens;
  bundle.sampler = fit_event_time_sampler(ds, mode, dpmm, derive_seed(a.seed, 1));
  for (std::size_t s = 0; s < a.strata.size(); ++s) {
    const auto col = ds.column_index(a.strata[s]);
    if (!col || !ds.column_schema(*col).is_categorical()) {
      throw SchemaError("strata column '" + a.strata[s] + "' is not a categorical covariate");
    }
    const auto& labels = ds.column_schema(*col).categories;
    for (std::size_t c = 0; c < labels.size(); ++c) {
      std::vector<std::size_t> rows;
      for (std::size_t i = 0; i < ds.rows(); ++i) {
        if (static_cast<std::size_t>(ds.value(i, *col)) == c) rows.push_back(i);
      }
      if (rows.empty()) continue;
      bundle.strata_samplers[a.strata[s]][labels[c]] = fit_event_time_sampler(
          ds.subset(rows), mode, dpmm, derive_seed(a.seed, 1000 * (s + 1) + c));
    }
  }
  bundle.generator = fit_generator(ds, kind, gen_opts, derive_seed(a.seed, 2));
  save_bundle(a.out, bundle);

  std::cout << "rows: " << ds.rows() << "\n"
            << "event rate: " << format_real(bundle.sampler.rate()) << "\n"
            << "sampler: " << to_string(mode) << "\n"
            << "generator: " << to_string(kind) << "\n";
  if (kind != GeneratorKind::smote) {
    const auto& trace = bundle.generator.cvae().elbo_trace;
    std::cout << "elbo (last epochs):";
    for (std::size_t i = trace.size() > 5 ? trace.size() - 5 : 0; i < trace.size(); ++i) {
      std::cout << " " << format_real(trace[i]);
    }
    std::cout << "\n";
  }
  std::cout << "bundle: " << a.out << "\n";
  return 0;
}

struct SynthArgs {
  std::string bundle, out, strata;
  std::size_t n = 0;
  std::size_t per_stratum = 0;
  bool balanced = false;
  std::uint64_t seed = 0;
};

int cmd_synthesize(const SynthArgs& a) {
  const ModelBundle bundle = load_bundle(a.bundle);
  std::mt19937_64 rng(derive_seed(a.seed, 3));
  SurvivalDataset syn;
  if (a.balanced) {
    if (a.strata.empty() || a.per_stratum == 0) {
      throw UsageError("--balanced needs --strata and --per-stratum");
    }
    const auto& schema = bundle.generator.schema();
    const bool known = std::any_of(schema.begin(), schema.end(), [&](const ColumnSchema& c) {
      return c.name == a.strata && c.is_categorical();
    });
    if (!known) throw SchemaError("strata column '" + a.strata + "' is not a categorical covariate of the bundle");
    const auto it = bundle.strata_samplers.find(a.strata);
    if (it == bundle.strata_samplers.end()) {
      throw SchemaError("bundle has no per-stratum samplers for '" + a.strata +
                        "'; refit with --strata " + a.strata);
    }
    std::map<std::string, std::size_t> counts;
    for (const auto& [label, _] : it->second) counts[label] = a.per_stratum;
    syn = balanced_generate(bundle.generator, a.strata, it->second, counts, rng);
  } else {
    if (a.n == 0) throw UsageError("--n must be at least 1");
    syn = generate(bundle.generator, bundle.sampler, a.n, rng);
  }
  save_csv(a.out, syn);
  std::cout << "wrote " << syn.rows() << " rows to " << a.out << "\n";
  return 0;
}

struct EvalArgs {
  std::string real, syn, schema, out;
  std::vector<std::string> metrics;
};

int cmd_evaluate(const EvalArgs& a) {
  static const std::vector<std::string> valid = {"km_divergence", "optimism", "shortsightedness",
                                                 "js_distance", "ws_distance", "dcr"};
  std::vector<std::string> metrics = a.metrics.empty() ? valid : a.metrics;
  for (const auto& m : metrics) {
    if (m == "c_index" || m == "brier") {
      throw UsageError("metric '" + m +
                       "' needs a downstream model trained on synthetic data and a held-out real "
                       "fold; use the benchmark subcommand");
    }
    if (std::find(valid.begin(), valid.end(), m) == valid.end()) {
      std::string names;
      for (const auto& v : valid) names += (names.empty() ? "" : ", ") + v;
      throw UsageError("unknown metric '" + m + "'; valid names: " + names);
    }
  }
  const SurvivalDataset real = load_dataset(a.real, a.schema);
  // The synthetic file is read against the real data's categories so codes line up.
  SchemaConfig syn_cfg = schema_config_from(real);
  syn_cfg.missing_tokens = load_schema_config(a.schema).missing_tokens;
  const SurvivalDataset syn = load_csv(a.syn, syn_cfg);
  if (!same_schema(real, syn)) {
    throw SchemaError("synthetic data has categories not present in the real data");
  }

  RunRecord run;
  run.train_rows = real.rows();
  run.synthetic_rows = syn.rows();
  const std::set<std::string> wanted(metrics.begin(), metrics.end());
  const MetricGrid grid = union_grid(real, syn);
  if (wanted.contains("km_divergence")) run.metrics["km_divergence"] = km_divergence(real, syn, grid);
  if (wanted.contains("optimism")) run.metrics["optimism"] = optimism(real, syn, grid);
  if (wanted.contains("shortsightedness")) run.metrics["shortsightedness"] = shortsightedness(real, syn);
  if (wanted.contains("js_distance")) run.metrics["js_distance"] = js_distance(real, syn).value;
  if (wanted.contains("ws_distance")) run.metrics["ws_distance"] = ws_distance(real, syn).value;
  if (wanted.contains("dcr")) {
    const DcrResult d = dcr(real, syn);
    run.metrics["dcr_median"] = d.median;
    run.metrics["dcr_min"] = d.minimum;
  }
  EvalReport report;
  report.config = {{"mode", "evaluate"}, {"metrics", metrics}};
  report.runs.push_back(run);
  finalize_aggregates(report);
  report_write(report, a.out);
  for (const auto& [name, v] : run.metrics) std::cout << name << ": " << format_real(v) << "\n";
  return 0;
}

struct BenchArgs {
  std::string data, schema, config, out;
  unsigned threads = 0;
};

int cmd_benchmark(const BenchArgs& a) {
  const BenchConfig cfg =
      a.config.empty() ? BenchConfig{} : bench_config_from_json(parse_json(read_text_file(a.config)));
  const SurvivalDataset ds = load_dataset(a.data, a.schema);
  RunOptions opts;
  opts.threads = a.threads;
  opts.on_run_done = [](const RunRecord& r) {
    std::cerr << "fold " << r.fold << " seed " << r.seed << " done";
    for (const auto& [name, v] : r.metrics) std::cerr << " " << name << "=" << format_real(v);
    std::cerr << "\n";
  };
  const EvalReport report = run_tstr(ds, cfg, opts);
  report_write(report, a.out);
  for (const auto& [name, agg] : report.aggregates) {
    std::cout << name << ": " << format_real(agg.mean) << " +/- " << format_real(agg.std) << "\n";
  }
  return 0;
}

struct KmArgs {
  std::string data, schema, out;
};

int cmd_km_export(const KmArgs& a) {
  const SurvivalDataset ds = load_dataset(a.data, a.schema);
  const KMCurve curve = kaplan_meier(ds.time(), ds.event());
  std::ostringstream out;
  out << "time,survival\n";
  // Leading (0, 1) knot unless an event at t = 0 already defines S(0).
  if (curve.event_times.empty() || curve.event_times.front() > 0.0) out << "0,1\n";
  for (std::size_t i = 0; i < curve.event_times.size(); ++i) {
    out << format_real(curve.event_times[i]) << "," << format_real(curve.survival[i]) << "\n";
  }
  write_text_file_atomic(a.out, out.str());
  return 0;
}

int exit_code_for(const RunFailure& e) {
  switch (e.cause()) {
    case RunFailure::Cause::config: return kExitUsage;
    case RunFailure::Cause::domain: return kExitData;
    default: return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic right-censored survival data: fit, synthesize, evaluate, benchmark"};
  app.require_subcommand(1, 1);
  app.failure_message(CLI::FailureMessage::help);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit an event-time sampler and a generator; write a model bundle");
  fit_cmd->add_option("--data", fit.data, "Input CSV")->required();
  fit_cmd->add_option("--schema", fit.schema, "Schema config (JSON)")->required();
  fit_cmd->add_option("--sampler", fit.sampler, "Event-time sampler")->check(CLI::IsMember({"dpmm", "empirical"}));
  fit_cmd->add_option("--generator", fit.generator, "Covariate generator")
      ->check(CLI::IsMember({"cvae", "unconditional", "smote"}));
  fit_cmd->add_option("--config", fit.config, "Optional JSON with cvae, dpmm and smote_k settings")
      ;
  fit_cmd->add_option("--strata", fit.strata, "Categorical column(s) to fit per-stratum samplers for");
  fit_cmd->add_option("--out", fit.out, "Bundle path")->required();
  fit_cmd->add_option("--seed", fit.seed, "Random seed");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synthesize", "Generate a synthetic CSV from a bundle");
  synth_cmd->add_option("--bundle", synth.bundle, "Model bundle")->required();
  synth_cmd->add_option("--n", synth.n, "Number of rows");
  synth_cmd->add_option("--out", synth.out, "Output CSV")->required();
  synth_cmd->add_option("--seed", synth.seed, "Random seed");
  synth_cmd->add_flag("--balanced", synth.balanced, "Equal row counts per stratum");
  synth_cmd->add_option("--strata", synth.strata, "Stratum column for --balanced");
  synth_cmd->add_option("--per-stratum", synth.per_stratum, "Rows per stratum for --balanced");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Compare a synthetic CSV against real data");
  eval_cmd->add_option("--real", eval.real, "Real CSV")->required();
  eval_cmd->add_option("--syn", eval.syn, "Synthetic CSV")->required();
  eval_cmd->add_option("--schema", eval.schema, "Schema config (JSON)")->required();
  eval_cmd->add_option("--metrics", eval.metrics, "Comma-separated metric names")->delimiter(',');
  eval_cmd->add_option("--out", eval.out, "Report path")->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("benchmark", "Run the train-on-synthetic, test-on-real protocol");
  bench_cmd->add_option("--data", bench.data, "Input CSV")->required();
  bench_cmd->add_option("--schema", bench.schema, "Schema config (JSON)")->required();
  bench_cmd->add_option("--config", bench.config, "Benchmark config (JSON)");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (0 = all cores)");
  bench_cmd->add_option("--out", bench.out, "Report path")->required();

  KmArgs km;
  auto* km_cmd = app.add_subcommand("km-export", "Write the Kaplan-Meier curve as a (time, survival) CSV");
  km_cmd->add_option("--data", km.data, "Input CSV")->required();
  km_cmd->add_option("--schema", km.schema, "Schema config (JSON)")->required();
  km_cmd->add_option("--out", km.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit);
    if (*synth_cmd) return cmd_synthesize(synth);
    if (*eval_cmd) return cmd_evaluate(eval);
    if (*bench_cmd) return cmd_benchmark(bench);
    if (*km_cmd) return cmd_km_export(km);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RunFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const FitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const TrainingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
