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

// Conditional tabular variational autoencoder p_theta(x | c, u).
//
// Encoder q(u | x): x -> hidden layers -> [mu(x), log sigma^2(x)].
// Decoder p(x | c, u): [u (+) c] -> hidden layers -> one output per encoded
// slot. Continuous and binary slots are Gaussian with a learned per-slot
// log-variance; categorical slot groups are softmax logits.
// All weights live in one flat parameter vector; layers are views into it.
//
// In the unconditional variant c is empty and the data encoder carries extra
// time and event slots, so (x, t, e) all come out of the decoder.

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "survsynth/dataset.hpp"
#include "survsynth/encoder.hpp"
#include "survsynth/time_embedding.hpp"

namespace survsynth {

struct CvaeConfig {
  int latent_dim = 16;
  std::vector<int> hidden = {128, 128};
  int epochs = 1000;
  int batch_size = 200;
  double learning_rate = 1e-3;
  double kl_weight = 1.0;
  int embedding_dim = 4;
  // Draw continuous slots from N(mean, sigma^2) at generation instead of
  // emitting the decoder mean.
  bool stochastic_continuous = false;
  double leaky_slope = 0.2;

  friend bool operator==(const CvaeConfig&, const CvaeConfig&) = default;
};

struct DenseShape {
  Eigen::Index in = 0;
  Eigen::Index out = 0;
  Eigen::Index weight_offset = 0;  // out x in, column-major
  Eigen::Index bias_offset = 0;
};

// Network shapes and the slot semantics of the data being modelled.
struct CvaeArchitecture {
  std::vector<SlotGroup> slots;  // data layout (decoder output semantics)
  Eigen::Index data_width = 0;
  Eigen::Index condition_width = 0;
  Eigen::Index latent_dim = 0;
  std::vector<DenseShape> encoder;
  std::vector<DenseShape> decoder;
  Eigen::Index logvar_offset = 0;  // one entry per data slot; used by continuous/binary slots
  Eigen::Index parameter_count = 0;
  double leaky_slope = 0.2;

  static CvaeArchitecture build(const std::vector<SlotGroup>& slots, Eigen::Index condition_width,
                                int latent_dim, const std::vector<int>& hidden, double leaky_slope);
};

inline constexpr double kMinDecoderLogVar = -9.210340371976182;  // log(0.01^2)
inline constexpr double kMaxDecoderLogVar = 0.0;

struct CvaeObjective {
  double loss = 0.0;            // negative ELBO, averaged over the batch
  double reconstruction = 0.0;  // mean -log p(x | c, u)
  double kl = 0.0;              // mean KL(q(u | x) || N(0, I))
};

// Negative ELBO of a batch for fixed reparameterization noise, with its
// analytic gradient (when `gradient` is non-null). Columns are samples:
// x is data_width x B, c is condition_width x B, noise is latent_dim x B.
CvaeObjective cvae_objective(const CvaeArchitecture& arch, const Eigen::VectorXd& params,
                             const Eigen::MatrixXd& x, const Eigen::MatrixXd& c,
                             const Eigen::MatrixXd& noise, double kl_weight,
                             Eigen::VectorXd* gradient);

// Glorot-uniform weights, zero biases, decoder log-variances at -1.
Eigen::VectorXd init_parameters(const CvaeArchitecture& arch, std::mt19937_64& rng);

struct CvaeModel {
  bool conditional = true;
  CvaeConfig config;
  Encoder data_encoder;
  TimeEmbeddingConfig embedding;
  CvaeArchitecture arch;
  Eigen::VectorXd params;
  std::vector<double> elbo_trace;  // per epoch

  // Decoder forward pass: rows of the returned matrix are samples, in the
  // encoded layout (continuous means / logits).
  Eigen::MatrixXd decode_raw(const Eigen::MatrixXd& latent, const Eigen::MatrixXd& condition) const;
};

// Conditional training on (x | t, e). Throws TrainingError on a non-finite
// loss and DomainError on empty input.
CvaeModel train_cvae(const SurvivalDataset& ds, const CvaeConfig& config, std::uint64_t seed);
// Unconditional training on the joint (x, t, e).
CvaeModel train_unconditional_cvae(const SurvivalDataset& ds, const CvaeConfig& config,
                                   std::uint64_t seed);

// Decodes covariates for the given (t, e) pairs (conditional models only).
// Categorical groups are sampled from their softmax.
std::vector<std::vector<double>> cvae_sample_covariates(const CvaeModel& model,
                                                        std::span<const double> time,
                                                        std::span<const int> event,
                                                        std::mt19937_64& rng);

// Samples n complete rows from an unconditional model: times clamped at 0,
// events thresholded at 0.5.
SurvivalDataset cvae_sample_unconditional(const CvaeModel& model, const SurvivalDataset& like,
                                          std::size_t n, std::mt19937_64& rng);

}  // namespace survsynth
