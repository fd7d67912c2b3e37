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

#include "survsynth/serialization.hpp"

#include <cmath>
#include <set>

#include "survsynth/error.hpp"
#include "survsynth/io.hpp"

namespace survsynth {
namespace {

using json = nlohmann::json;

void expect_format(const json& j, const char* tag) {
  if (!j.is_object() || !j.contains("format") || j.at("format") != tag) {
    throw SchemaError(std::string("expected a document with format '") + tag + "'");
  }
}

// NaN is stored as null.
json real_array(std::span<const double> v) {
  json out = json::array();
  for (double x : v) out.push_back(std::isnan(x) ? json(nullptr) : json(x));
  return out;
}

std::vector<double> real_vector(const json& j) {
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(x.is_null() ? kMissing : x.get<double>());
  return out;
}

json schema_to_json(const std::vector<ColumnSchema>& schema) {
  json out = json::array();
  for (const auto& c : schema) {
    json col{{"name", c.name}, {"kind", std::string(to_string(c.kind))}};
    if (c.is_categorical()) col["categories"] = c.categories;
    out.push_back(std::move(col));
  }
  return out;
}

std::vector<ColumnSchema> schema_from_json(const json& j) {
  std::vector<ColumnSchema> out;
  for (const auto& c : j) {
    ColumnSchema s;
    s.name = c.at("name").get<std::string>();
    s.kind = column_kind_from_string(c.at("kind").get<std::string>());
    if (c.contains("categories")) s.categories = c.at("categories").get<std::vector<std::string>>();
    out.push_back(std::move(s));
  }
  return out;
}

json layout_to_json(const CsvLayout& l) {
  return {{"time", l.time_name}, {"event", l.event_name}, {"order", l.order}};
}

CsvLayout layout_from_json(const json& j) {
  return {j.at("time").get<std::string>(), j.at("event").get<std::string>(),
          j.at("order").get<std::vector<std::string>>()};
}

std::string_view source_name(SlotGroup::Source s) {
  switch (s) {
    case SlotGroup::Source::covariate: return "covariate";
    case SlotGroup::Source::time: return "time";
    case SlotGroup::Source::event: return "event";
  }
  return "covariate";
}

SlotGroup::Source source_from(std::string_view s) {
  if (s == "covariate") return SlotGroup::Source::covariate;
  if (s == "time") return SlotGroup::Source::time;
  if (s == "event") return SlotGroup::Source::event;
  throw SchemaError("unknown slot source '" + std::string(s) + "'");
}

std::string_view slot_kind_name(SlotKind k) {
  switch (k) {
    case SlotKind::continuous: return "continuous";
    case SlotKind::categorical: return "categorical";
    case SlotKind::binary: return "binary";
  }
  return "continuous";
}

SlotKind slot_kind_from(std::string_view s) {
  if (s == "continuous") return SlotKind::continuous;
  if (s == "categorical") return SlotKind::categorical;
  if (s == "binary") return SlotKind::binary;
  throw SchemaError("unknown slot kind '" + std::string(s) + "'");
}

json time_model_to_json(const TimeModel& m) {
  if (const auto* d = std::get_if<DpmmModel>(&m)) {
    return {{"type", "dpmm"},
            {"transform", std::string(to_string(d->transform))},
            {"weights", d->weights},
            {"means", d->means},
            {"variances", d->variances},
            {"elbo_trace", d->elbo_trace},
            {"degenerate", d->degenerate},
            {"upper_bound", std::isfinite(d->upper_bound) ? json(d->upper_bound) : json(nullptr)}};
  }
  return {{"type", "empirical"}, {"times", std::get<EmpiricalTimes>(m).times}};
}

TimeModel time_model_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "empirical") return EmpiricalTimes{j.at("times").get<std::vector<double>>()};
  if (type != "dpmm") throw SchemaError("unknown time model type '" + type + "'");
  DpmmModel d;
  d.transform = time_transform_from_string(j.at("transform").get<std::string>());
  d.weights = j.at("weights").get<std::vector<double>>();
  d.means = j.at("means").get<std::vector<double>>();
  d.variances = j.at("variances").get<std::vector<double>>();
  d.elbo_trace = j.at("elbo_trace").get<std::vector<double>>();
  d.degenerate = j.at("degenerate").get<bool>();
  if (j.contains("upper_bound") && !j.at("upper_bound").is_null()) {
    d.upper_bound = j.at("upper_bound").get<double>();
  }
  if (d.means.size() != d.weights.size() || d.variances.size() != d.weights.size()) {
    throw SchemaError("DPMM component tables have different lengths");
  }
  return d;
}

json shapes_to_json(const std::vector<DenseShape>& layers) {
  json out = json::array();
  for (const auto& s : layers) out.push_back({s.in, s.out});
  return out;
}

void check_shapes(const json& j, const std::vector<DenseShape>& layers, const char* what) {
  if (j.size() != layers.size()) throw SchemaError(std::string(what) + " layer count mismatch");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (j[l][0].get<Eigen::Index>() != layers[l].in || j[l][1].get<Eigen::Index>() != layers[l].out) {
      throw SchemaError(std::string(what) + " layer " + std::to_string(l) + " shape mismatch");
    }
  }
}

// Converts nlohmann exceptions raised while reading a document.
template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

json encoder_to_json(const Encoder& enc) {
  json groups = json::array();
  for (const auto& g : enc.groups()) {
    groups.push_back({{"source", std::string(source_name(g.source))},
                      {"column", g.column},
                      {"kind", std::string(slot_kind_name(g.kind))},
                      {"offset", g.offset},
                      {"width", g.width},
                      {"mean", g.mean},
                      {"std", g.std}});
  }
  return {{"schema", schema_to_json(enc.schema())},
          {"groups", std::move(groups)},
          {"include_time", enc.options().include_time},
          {"include_event", enc.options().include_event}};
}

Encoder encoder_from_json(const json& j) {
  return guarded("encoder", [&] {
    std::vector<SlotGroup> groups;
    for (const auto& g : j.at("groups")) {
      SlotGroup s;
      s.source = source_from(g.at("source").get<std::string>());
      s.column = g.at("column").get<std::size_t>();
      s.kind = slot_kind_from(g.at("kind").get<std::string>());
      s.offset = g.at("offset").get<std::size_t>();
      s.width = g.at("width").get<std::size_t>();
      s.mean = g.at("mean").get<double>();
      s.std = g.at("std").get<double>();
      groups.push_back(s);
    }
    return Encoder(schema_from_json(j.at("schema")), std::move(groups),
                   EncoderOptions{j.at("include_time").get<bool>(), j.at("include_event").get<bool>()});
  });
}

json sampler_to_json(const EventTimeSampler& s) {
  return {{"format", kSamplerFormat},
          {"mode", std::string(to_string(s.mode()))},
          {"rate", s.rate()},
          {"censored", time_model_to_json(s.time_model(0))},
          {"observed", time_model_to_json(s.time_model(1))}};
}

EventTimeSampler sampler_from_json(const json& j) {
  expect_format(j, kSamplerFormat);
  return guarded("sampler", [&] {
    return EventTimeSampler(sampler_mode_from_string(j.at("mode").get<std::string>()),
                            EventRateModel{j.at("rate").get<double>()},
                            time_model_from_json(j.at("censored")),
                            time_model_from_json(j.at("observed")));
  });
}

json cvae_config_to_json(const CvaeConfig& c) {
  return {{"latent_dim", c.latent_dim},   {"hidden", c.hidden},
          {"epochs", c.epochs},           {"batch_size", c.batch_size},
          {"learning_rate", c.learning_rate}, {"kl_weight", c.kl_weight},
          {"embedding_dim", c.embedding_dim}, {"stochastic_continuous", c.stochastic_continuous},
          {"leaky_slope", c.leaky_slope}};
}

CvaeConfig cvae_config_from_json(const json& j) {
  static const std::set<std::string> known = {"latent_dim", "hidden", "epochs", "batch_size",
                                              "learning_rate", "kl_weight", "embedding_dim",
                                              "stochastic_continuous", "leaky_slope"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown CVAE option '" + key + "'");
  }
  CvaeConfig c;
  try {
    c.latent_dim = j.value("latent_dim", c.latent_dim);
    c.hidden = j.value("hidden", c.hidden);
    c.epochs = j.value("epochs", c.epochs);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.kl_weight = j.value("kl_weight", c.kl_weight);
    c.embedding_dim = j.value("embedding_dim", c.embedding_dim);
    c.stochastic_continuous = j.value("stochastic_continuous", c.stochastic_continuous);
    c.leaky_slope = j.value("leaky_slope", c.leaky_slope);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("CVAE options: ") + e.what());
  }
  return c;
}

json dpmm_config_to_json(const DpmmConfig& c) {
  return {{"truncation", c.truncation},
          {"concentration", c.concentration},
          {"prior_mean_strength", c.prior_mean_strength},
          {"prior_shape", c.prior_shape},
          {"max_iters", c.max_iters},
          {"tol", c.tol},
          {"transform", std::string(to_string(c.transform))},
          {"bound_to_observed", c.bound_to_observed}};
}

DpmmConfig dpmm_config_from_json(const json& j) {
  static const std::set<std::string> known = {"truncation", "concentration", "prior_mean_strength",
                                              "prior_shape", "max_iters", "tol", "transform",
                                              "bound_to_observed"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown DPMM option '" + key + "'");
  }
  DpmmConfig c;
  try {
    c.truncation = j.value("truncation", c.truncation);
    c.concentration = j.value("concentration", c.concentration);
    c.prior_mean_strength = j.value("prior_mean_strength", c.prior_mean_strength);
    c.prior_shape = j.value("prior_shape", c.prior_shape);
    c.max_iters = j.value("max_iters", c.max_iters);
    c.tol = j.value("tol", c.tol);
    c.bound_to_observed = j.value("bound_to_observed", c.bound_to_observed);
    if (j.contains("transform")) {
      c.transform = time_transform_from_string(j.at("transform").get<std::string>());
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("DPMM options: ") + e.what());
  }
  return c;
}

json cvae_to_json(const CvaeModel& m) {
  return {{"format", kCvaeFormat},
          {"conditional", m.conditional},
          {"config", cvae_config_to_json(m.config)},
          {"encoder", encoder_to_json(m.data_encoder)},
          {"embedding", {{"m", m.embedding.m}, {"t_scale", m.embedding.t_scale}}},
          {"encoder_layers", shapes_to_json(m.arch.encoder)},
          {"decoder_layers", shapes_to_json(m.arch.decoder)},
          {"parameters", real_array({m.params.data(), static_cast<std::size_t>(m.params.size())})},
          {"elbo_trace", m.elbo_trace}};
}

CvaeModel cvae_from_json(const json& j) {
  expect_format(j, kCvaeFormat);
  return guarded("CVAE model", [&] {
    CvaeModel m;
    m.conditional = j.at("conditional").get<bool>();
    m.config = cvae_config_from_json(j.at("config"));
    m.data_encoder = encoder_from_json(j.at("encoder"));
    m.embedding = {j.at("embedding").at("m").get<int>(), j.at("embedding").at("t_scale").get<double>()};
    const Eigen::Index cond = m.conditional ? m.embedding.m + 1 : 0;
    m.arch = CvaeArchitecture::build(m.data_encoder.groups(), cond, m.config.latent_dim,
                                     m.config.hidden, m.config.leaky_slope);
    check_shapes(j.at("encoder_layers"), m.arch.encoder, "encoder");
    check_shapes(j.at("decoder_layers"), m.arch.decoder, "decoder");
    const auto p = real_vector(j.at("parameters"));
    if (static_cast<Eigen::Index>(p.size()) != m.arch.parameter_count) {
      throw SchemaError("CVAE parameter count mismatch");
    }
    m.params = Eigen::Map<const Eigen::VectorXd>(p.data(), m.arch.parameter_count);
    if (!m.params.allFinite()) throw SchemaError("CVAE parameters must be finite");
    m.elbo_trace = j.at("elbo_trace").get<std::vector<double>>();
    return m;
  });
}

json dataset_to_json(const SurvivalDataset& ds) {
  json cols = json::array();
  for (const auto& c : ds.columns()) cols.push_back(real_array(c));
  return {{"schema", schema_to_json(ds.schema())},
          {"layout", layout_to_json(ds.layout())},
          {"columns", std::move(cols)},
          {"time", ds.time()},
          {"event", ds.event()}};
}

SurvivalDataset dataset_from_json(const json& j) {
  return guarded("dataset", [&] {
    std::vector<std::vector<double>> cols;
    for (const auto& c : j.at("columns")) cols.push_back(real_vector(c));
    return SurvivalDataset(schema_from_json(j.at("schema")), std::move(cols),
                           j.at("time").get<std::vector<double>>(),
                           j.at("event").get<std::vector<int>>(), layout_from_json(j.at("layout")));
  });
}

json generator_to_json(const GeneratorHandle& g) {
  json out{{"kind", std::string(to_string(g.kind()))},
           {"schema", schema_to_json(g.schema())},
           {"layout", layout_to_json(g.layout())}};
  if (g.kind() == GeneratorKind::smote) {
    out["smote"] = {{"k", g.smote().k}, {"data", dataset_to_json(g.smote().data)}};
  } else {
    out["cvae"] = cvae_to_json(g.cvae());
  }
  return out;
}

GeneratorHandle generator_from_json(const json& j) {
  return guarded("generator", [&] {
    const auto kind = generator_kind_from_string(j.at("kind").get<std::string>());
    auto schema = schema_from_json(j.at("schema"));
    auto layout = layout_from_json(j.at("layout"));
    if (kind == GeneratorKind::smote) {
      const auto& s = j.at("smote");
      return GeneratorHandle(kind, SmoteModel{dataset_from_json(s.at("data")), s.at("k").get<int>()},
                             std::move(schema), std::move(layout));
    }
    return GeneratorHandle(kind, cvae_from_json(j.at("cvae")), std::move(schema), std::move(layout));
  });
}

json bundle_to_json(const ModelBundle& b) {
  json strata = json::object();
  for (const auto& [column, per] : b.strata_samplers) {
    json m = json::object();
    for (const auto& [label, s] : per) m[label] = sampler_to_json(s);
    strata[column] = std::move(m);
  }
  return {{"format", kBundleFormat},
          {"schema", parse_json(schema_config_to_json(b.schema))},
          {"sampler", sampler_to_json(b.sampler)},
          {"generator", generator_to_json(b.generator)},
          {"strata_samplers", std::move(strata)}};
}

ModelBundle bundle_from_json(const json& j) {
  expect_format(j, kBundleFormat);
  return guarded("bundle", [&] {
    ModelBundle b;
    b.schema = parse_schema_config(j.at("schema").dump());
    b.sampler = sampler_from_json(j.at("sampler"));
    b.generator = generator_from_json(j.at("generator"));
    for (const auto& [column, per] : j.at("strata_samplers").items()) {
      for (const auto& [label, s] : per.items()) b.strata_samplers[column][label] = sampler_from_json(s);
    }
    return b;
  });
}

void save_bundle(const std::filesystem::path& path, const ModelBundle& b) {
  write_text_file_atomic(path, bundle_to_json(b).dump() + "\n");
}

ModelBundle load_bundle(const std::filesystem::path& path) {
  return bundle_from_json(parse_json(read_text_file(path)));
}

}  // namespace survsynth
