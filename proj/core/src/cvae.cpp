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

#include "survsynth/cvae.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "survsynth/error.hpp"

namespace survsynth {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

template <typename T>
Eigen::Map<const Mat<T>> weights(const DenseShape& s, const Vec<T>& p) {
  return Eigen::Map<const Mat<T>>(p.data() + s.weight_offset, s.out, s.in);
}
template <typename T>
Eigen::Map<const Vec<T>> bias(const DenseShape& s, const Vec<T>& p) {
  return Eigen::Map<const Vec<T>>(p.data() + s.bias_offset, s.out);
}

std::vector<DenseShape> stack_layers(Index in, const std::vector<int>& hidden, Index out,
                                     Index& cursor) {
  std::vector<DenseShape> layers;
  Index prev = in;
  auto add = [&](Index width) {
    DenseShape s{prev, width, cursor, cursor + width * prev};
    cursor += width * prev + width;
    layers.push_back(s);
    prev = width;
  };
  for (int h : hidden) add(h);
  add(out);
  return layers;
}

// Activations of one MLP pass. pre[l] is the pre-activation of layer l,
// act[l] its input (act[0] is the network input).
template <typename T>
struct MlpTrace {
  std::vector<Mat<T>> act;
  std::vector<Mat<T>> pre;
};

template <typename T>
Mat<T> mlp_forward(const std::vector<DenseShape>& layers, const Vec<T>& p, const Mat<T>& input,
                   T slope, MlpTrace<T>* trace) {
  Mat<T> h = input;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    Mat<T> z = weights(layers[l], p) * h;
    z.colwise() += bias(layers[l], p);
    if (trace) {
      trace->act.push_back(std::move(h));
      trace->pre.push_back(z);
    }
    if (l + 1 < layers.size()) z = z.cwiseMax(slope * z);
    h = std::move(z);
  }
  return h;
}

// Back-propagates dL/d(output) through the MLP, accumulating parameter
// gradients into `grad`. Returns dL/d(input).
template <typename T>
Mat<T> mlp_backward(const std::vector<DenseShape>& layers, const Vec<T>& p,
                    const MlpTrace<T>& trace, Mat<T> delta, T slope, Vec<T>& grad) {
  for (std::size_t l = layers.size(); l-- > 0;) {
    const DenseShape& s = layers[l];
    if (l + 1 < layers.size()) {
      delta.array() *= trace.pre[l].array().unaryExpr([slope](T v) { return v > T(0) ? T(1) : slope; });
    }
    Eigen::Map<Mat<T>>(grad.data() + s.weight_offset, s.out, s.in).noalias() +=
        delta * trace.act[l].transpose();
    Eigen::Map<Vec<T>>(grad.data() + s.bias_offset, s.out) += delta.rowwise().sum();
    delta = weights(s, p).transpose() * delta;
  }
  return delta;
}

template <typename T>
void clamp_logvars(const CvaeArchitecture& arch, Vec<T>& p) {
  auto s = p.segment(arch.logvar_offset, arch.data_width);
  s = s.cwiseMax(T(kMinDecoderLogVar)).cwiseMin(T(kMaxDecoderLogVar));
}

void softmax_inplace(Eigen::Ref<VectorXd> v) {
  const double m = v.maxCoeff();
  v = (v.array() - m).exp();
  v /= v.sum();
}

MatrixXd condition_matrix(std::span<const double> time, std::span<const int> event,
                          const TimeEmbeddingConfig& emb) {
  MatrixXd c(emb.m + 1, static_cast<Index>(time.size()));
  for (std::size_t i = 0; i < time.size(); ++i) {
    const auto v = condition_vector(time[i], event[i], emb);
    for (std::size_t k = 0; k < v.size(); ++k) c(static_cast<Index>(k), static_cast<Index>(i)) = v[k];
  }
  return c;
}

void validate_config(const CvaeConfig& cfg) {
  if (cfg.latent_dim < 1) throw ConfigError("latent dimension must be at least 1");
  if (cfg.epochs < 1) throw ConfigError("epochs must be at least 1");
  if (cfg.batch_size < 1) throw ConfigError("batch size must be at least 1");
  if (!(cfg.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (!(cfg.kl_weight >= 0.0)) throw ConfigError("KL weight must be non-negative");
  if (!(cfg.leaky_slope >= 0.0 && cfg.leaky_slope < 1.0)) {
    throw ConfigError("leaky slope must lie in [0, 1)");
  }
  for (int h : cfg.hidden) {
    if (h < 1) throw ConfigError("hidden layer widths must be positive");
  }
}

template <typename T>
CvaeObjective objective_impl(const CvaeArchitecture& arch, const Vec<T>& params, const Mat<T>& x,
                             const Mat<T>& c, const Mat<T>& noise, T kl_weight, Vec<T>* gradient) {
  const Index b = x.cols();
  const T inv_b = T(1) / static_cast<T>(b);
  const T slope = static_cast<T>(arch.leaky_slope);
  const Index d = arch.latent_dim;

  MlpTrace<T> enc_trace, dec_trace;
  const Mat<T> enc_out = mlp_forward<T>(arch.encoder, params, x, slope, gradient ? &enc_trace : nullptr);
  const auto mu = enc_out.topRows(d);
  const auto logvar = enc_out.bottomRows(d);
  const Mat<T> sigma = (T(0.5) * logvar.array()).exp().matrix();
  Mat<T> dec_in(d + arch.condition_width, b);
  dec_in.topRows(d) = mu + sigma.cwiseProduct(noise);
  if (arch.condition_width > 0) dec_in.bottomRows(arch.condition_width) = c;
  const Mat<T> y = mlp_forward<T>(arch.decoder, params, dec_in, slope, gradient ? &dec_trace : nullptr);

  Mat<T> dy;
  if (gradient) {
    gradient->setZero(arch.parameter_count);
    dy.resize(y.rows(), b);
  }
  constexpr double kLog2Pi = 1.8378770664093453;
  double recon = 0.0;
  for (const auto& g : arch.slots) {
    const Index off = static_cast<Index>(g.offset);
    const Index w = static_cast<Index>(g.width);
    if (g.kind == SlotKind::categorical) {
      // Cross-entropy against the one-hot target, column-wise log-sum-exp.
      const auto yg = y.middleRows(off, w);
      const auto xg = x.middleRows(off, w);
      const Eigen::Matrix<T, 1, Eigen::Dynamic> top = yg.colwise().maxCoeff();
      const Mat<T> ex = (yg.rowwise() - top).array().exp().matrix();
      const Eigen::Matrix<T, 1, Eigen::Dynamic> total = ex.colwise().sum();
      const auto lse = top.array() + total.array().log();
      recon += static_cast<double>(lse.sum() - yg.cwiseProduct(xg).sum());
      if (gradient) {
        dy.middleRows(off, w) = (ex.array().rowwise() / total.array() - xg.array()).matrix() * inv_b;
      }
    } else {
      const T sv = params[arch.logvar_offset + off];
      const T prec = std::exp(-sv);
      const auto r = (y.row(off) - x.row(off)).array();
      const T sq = r.square().sum();
      recon += 0.5 * (static_cast<double>(b) * (kLog2Pi + static_cast<double>(sv)) +
                      static_cast<double>(sq * prec));
      if (gradient) {
        dy.row(off) = (r * (prec * inv_b)).matrix();
        (*gradient)[arch.logvar_offset + off] = T(0.5) * (static_cast<T>(b) - sq * prec) * inv_b;
      }
    }
  }
  const double kl = static_cast<double>(
      T(0.5) * (mu.array().square() + logvar.array().exp() - T(1) - logvar.array()).sum());
  CvaeObjective obj;
  obj.reconstruction = recon / static_cast<double>(b);
  obj.kl = kl / static_cast<double>(b);
  obj.loss = obj.reconstruction + static_cast<double>(kl_weight) * obj.kl;

  if (gradient) {
    const Mat<T> d_in = mlp_backward<T>(arch.decoder, params, dec_trace, std::move(dy), slope, *gradient);
    const auto du = d_in.topRows(d);
    Mat<T> d_enc(2 * d, b);
    d_enc.topRows(d) = du + (kl_weight * inv_b) * mu;
    d_enc.bottomRows(d) = (du.array() * noise.array() * T(0.5) * sigma.array() +
                           (kl_weight * inv_b * T(0.5)) * (logvar.array().exp() - T(1)))
                              .matrix();
    mlp_backward<T>(arch.encoder, params, enc_trace, std::move(d_enc), slope, *gradient);
  }
  return obj;
}

void check_batch(const CvaeArchitecture& arch, const MatrixXd& x, const MatrixXd& c,
                 const MatrixXd& noise) {
  const Index b = x.cols();
  if (x.rows() != arch.data_width || c.rows() != arch.condition_width ||
      noise.rows() != arch.latent_dim || c.cols() != b || noise.cols() != b) {
    throw LayoutError("CVAE batch dimensions do not match the architecture");
  }
  if (b == 0) throw DomainError("CVAE objective needs at least one sample");
}

// Adam in single precision; training runs in float for speed while the
// stored model and the public objective stay in double.
struct Adam {
  Vec<float> m, v;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  long step = 0;

  explicit Adam(Index n) : m(Vec<float>::Zero(n)), v(Vec<float>::Zero(n)) {}

  void update(Vec<float>& params, const Vec<float>& grad, double lr) {
    ++step;
    m = float(beta1) * m + float(1.0 - beta1) * grad;
    v = float(beta2) * v + float(1.0 - beta2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    const float step_size = static_cast<float>(lr / c1);
    const float inv_c2 = static_cast<float>(1.0 / c2);
    params.array() -= step_size * m.array() / ((v.array() * inv_c2).sqrt() + float(eps));
  }
};

// Shared training loop; `c` has zero rows for unconditional models.
void fit_parameters(CvaeModel& model, const MatrixXd& x_full, const MatrixXd& c_full,
                    std::uint64_t seed) {
  const CvaeConfig& cfg = model.config;
  const Mat<float> x = x_full.cast<float>();
  const Mat<float> c = c_full.cast<float>();
  const Index n = x.cols();
  std::mt19937_64 rng(seed);
  Vec<float> params = init_parameters(model.arch, rng).cast<float>();
  Adam adam(model.arch.parameter_count);
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec<float> grad(model.arch.parameter_count);
  Mat<float> xb, cb, noise;
  model.elbo_trace.clear();
  model.elbo_trace.reserve(static_cast<std::size_t>(cfg.epochs));

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    for (Index start = 0; start < n; start += cfg.batch_size) {
      const Index b = std::min<Index>(cfg.batch_size, n - start);
      xb.resize(x.rows(), b);
      cb.resize(c.rows(), b);
      for (Index k = 0; k < b; ++k) {
        xb.col(k) = x.col(order[static_cast<std::size_t>(start + k)]);
        cb.col(k) = c.col(order[static_cast<std::size_t>(start + k)]);
      }
      noise.resize(model.arch.latent_dim, b);
      for (Index k = 0; k < noise.size(); ++k) noise.data()[k] = static_cast<float>(normal(rng));
      const CvaeObjective obj = objective_impl<float>(model.arch, params, xb, cb, noise,
                                                      static_cast<float>(cfg.kl_weight), &grad);
      if (!std::isfinite(obj.loss) || !grad.allFinite()) {
        throw TrainingError("non-finite loss during CVAE training at epoch " +
                                std::to_string(epoch),
                            epoch);
      }
      total += obj.loss * static_cast<double>(b);
      adam.update(params, grad, cfg.learning_rate);
      clamp_logvars(model.arch, params);
    }
    model.elbo_trace.push_back(-total / static_cast<double>(n));
  }
  model.params = params.cast<double>();
}

}  // namespace

CvaeArchitecture CvaeArchitecture::build(const std::vector<SlotGroup>& slots,
                                         Index condition_width, int latent_dim,
                                         const std::vector<int>& hidden, double leaky_slope) {
  CvaeArchitecture a;
  a.slots = slots;
  for (const auto& g : slots) a.data_width += static_cast<Index>(g.width);
  a.condition_width = condition_width;
  a.latent_dim = latent_dim;
  a.leaky_slope = leaky_slope;
  Index cursor = 0;
  a.encoder = stack_layers(a.data_width, hidden, 2 * a.latent_dim, cursor);
  std::vector<int> reversed(hidden.rbegin(), hidden.rend());
  a.decoder = stack_layers(a.latent_dim + a.condition_width, reversed, a.data_width, cursor);
  a.logvar_offset = cursor;
  a.parameter_count = cursor + a.data_width;
  return a;
}

VectorXd init_parameters(const CvaeArchitecture& arch, std::mt19937_64& rng) {
  VectorXd p = VectorXd::Zero(arch.parameter_count);
  auto glorot = [&](const DenseShape& s) {
    const double limit = std::sqrt(6.0 / static_cast<double>(s.in + s.out));
    std::uniform_real_distribution<double> u(-limit, limit);
    for (Index k = 0; k < s.in * s.out; ++k) p[s.weight_offset + k] = u(rng);
  };
  for (const auto& s : arch.encoder) glorot(s);
  for (const auto& s : arch.decoder) glorot(s);
  p.segment(arch.logvar_offset, arch.data_width).setConstant(-1.0);
  return p;
}

CvaeObjective cvae_objective(const CvaeArchitecture& arch, const VectorXd& params,
                             const MatrixXd& x, const MatrixXd& c, const MatrixXd& noise,
                             double kl_weight, VectorXd* gradient) {
  check_batch(arch, x, c, noise);
  if (params.size() != arch.parameter_count) throw LayoutError("parameter vector has the wrong size");
  return objective_impl<double>(arch, params, x, c, noise, kl_weight, gradient);
}

MatrixXd CvaeModel::decode_raw(const MatrixXd& latent, const MatrixXd& condition) const {
  if (latent.cols() != arch.latent_dim || condition.cols() != arch.condition_width ||
      latent.rows() != condition.rows()) {
    throw LayoutError("decoder input dimensions do not match the model");
  }
  MatrixXd in(arch.latent_dim + arch.condition_width, latent.rows());
  in.topRows(arch.latent_dim) = latent.transpose();
  if (arch.condition_width > 0) in.bottomRows(arch.condition_width) = condition.transpose();
  return mlp_forward<double>(arch.decoder, params, in, arch.leaky_slope, nullptr).transpose();
}

CvaeModel train_cvae(const SurvivalDataset& ds, const CvaeConfig& config, std::uint64_t seed) {
  validate_config(config);
  if (ds.rows() == 0) throw DomainError("cannot train a CVAE on an empty dataset");
  CvaeModel model;
  model.conditional = true;
  model.config = config;
  model.data_encoder = Encoder::fit(ds);
  const double tmax = ds.max_time();
  model.embedding = TimeEmbeddingConfig{config.embedding_dim, tmax > 0.0 ? tmax : 1.0};
  validate(model.embedding);
  model.arch = CvaeArchitecture::build(model.data_encoder.groups(), model.embedding.m + 1,
                                       config.latent_dim, config.hidden, config.leaky_slope);
  const MatrixXd x = model.data_encoder.encode(ds).values.transpose();
  const MatrixXd c = condition_matrix(ds.time(), ds.event(), model.embedding);
  fit_parameters(model, x, c, seed);
  return model;
}

CvaeModel train_unconditional_cvae(const SurvivalDataset& ds, const CvaeConfig& config,
                                   std::uint64_t seed) {
  validate_config(config);
  if (ds.rows() == 0) throw DomainError("cannot train a CVAE on an empty dataset");
  CvaeModel model;
  model.conditional = false;
  model.config = config;
  model.data_encoder = Encoder::fit(ds, EncoderOptions{true, true});
  model.embedding = TimeEmbeddingConfig{config.embedding_dim, 1.0};
  model.arch = CvaeArchitecture::build(model.data_encoder.groups(), 0, config.latent_dim,
                                       config.hidden, config.leaky_slope);
  const MatrixXd x = model.data_encoder.encode(ds).values.transpose();
  const MatrixXd c(0, x.cols());
  fit_parameters(model, x, c, seed);
  return model;
}

namespace {

// Turns raw decoder outputs (rows = samples) into an encoded matrix with
// sampled one-hot categorical groups and optionally noisy continuous slots.
MatrixXd realize_outputs(const CvaeModel& model, MatrixXd raw, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (Index i = 0; i < raw.rows(); ++i) {
    for (const auto& g : model.arch.slots) {
      const Index off = static_cast<Index>(g.offset);
      const Index w = static_cast<Index>(g.width);
      if (g.kind == SlotKind::categorical) {
        VectorXd p = raw.block(i, off, 1, w).transpose();
        softmax_inplace(p);
        const double r = unif(rng);
        Index pick = w - 1;
        double acc = 0.0;
        for (Index k = 0; k < w; ++k) {
          acc += p[k];
          if (r < acc) {
            pick = k;
            break;
          }
        }
        raw.block(i, off, 1, w).setZero();
        raw(i, off + pick) = 1.0;
      } else if (model.config.stochastic_continuous) {
        raw(i, off) += std::exp(0.5 * model.params[model.arch.logvar_offset + off]) * normal(rng);
      }
    }
  }
  return raw;
}

MatrixXd standard_normal(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

}  // namespace

std::vector<std::vector<double>> cvae_sample_covariates(const CvaeModel& model,
                                                        std::span<const double> time,
                                                        std::span<const int> event,
                                                        std::mt19937_64& rng) {
  if (!model.conditional) throw ConfigError("covariate sampling needs a conditional model");
  if (time.size() != event.size()) throw LayoutError("time and event lengths differ");
  const Index n = static_cast<Index>(time.size());
  const MatrixXd latent = standard_normal(n, model.arch.latent_dim, rng);
  const MatrixXd cond = condition_matrix(time, event, model.embedding).transpose();
  const MatrixXd encoded = realize_outputs(model, model.decode_raw(latent, cond), rng);
  return model.data_encoder.decode(encoded).columns;
}

SurvivalDataset cvae_sample_unconditional(const CvaeModel& model, const SurvivalDataset& like,
                                          std::size_t n, std::mt19937_64& rng) {
  if (model.conditional) throw ConfigError("joint sampling needs an unconditional model");
  const Index rows = static_cast<Index>(n);
  const MatrixXd latent = standard_normal(rows, model.arch.latent_dim, rng);
  const MatrixXd encoded = realize_outputs(model, model.decode_raw(latent, MatrixXd(rows, 0)), rng);
  DecodedRows dec = model.data_encoder.decode(encoded);
  std::vector<double> time(n);
  std::vector<int> event(n);
  for (std::size_t i = 0; i < n; ++i) {
    time[i] = std::max(0.0, dec.time[i]);
    event[i] = dec.event[i] >= 0.5 ? 1 : 0;
  }
  return SurvivalDataset(like.schema(), std::move(dec.columns), std::move(time), std::move(event),
                         like.layout());
}

}  // namespace survsynth
