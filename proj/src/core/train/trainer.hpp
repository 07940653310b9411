// Copyright 2026 The vqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/circuit/circuit.hpp"
#include "core/data/dataset.hpp"
#include "core/train/adam.hpp"
#include "core/train/plan.hpp"

namespace vqc::train {

enum class LossKind { MSE, CrossEntropy };
enum class GradientMode { ParameterShift, Adjoint };

const char* to_string(LossKind kind) noexcept;
const char* to_string(GradientMode mode) noexcept;

struct TrainConfig {
    int epochs = 200;
    double learning_rate = 0.01;
    std::size_t batch_size = 128;
    std::optional<LossKind> loss_kind;  // unset: MSE for 2/4 classes, else cross-entropy
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;
    GradientMode gradient_mode = GradientMode::Adjoint;
    double validation_fraction = 0.1;

    void validate() const;
    AdamSettings adam() const { return {learning_rate, adam_beta1, adam_beta2, adam_eps}; }
};

LossKind default_loss(const MeasurementPlan& plan);

/// Noiseless <Z> of each plan qubit.
std::vector<double> forward(const circuit::CircuitTemplate& tmpl, std::span<const double> params,
                            std::span<const double> features, const MeasurementPlan& plan);

double loss(std::span<const double> expectations, int label, const MeasurementPlan& plan, LossKind kind);

/// dL/d<Z_q> for each plan qubit.
std::vector<double> loss_gradient(std::span<const double> expectations, int label, const MeasurementPlan& plan,
                                  LossKind kind);

struct BatchItem {
    const circuit::FeatureVector* features;
    int label;
};

struct GradientResult {
    std::vector<double> gradient;  // mean over the batch
    double mean_loss = 0.0;
};

/// d<Z_q>/dtheta_k via the two-term shift rule, one row per plan qubit.
std::vector<std::vector<double>> expectation_jacobian_shift(const circuit::CircuitTemplate& tmpl,
                                                            std::span<const double> params,
                                                            std::span<const double> features,
                                                            const MeasurementPlan& plan);

/// Gradient of sum_q weights[q] <Z_q> with respect to the parameters by one
/// reverse sweep over the statevector.
std::vector<double> weighted_expectation_gradient_adjoint(const circuit::CircuitTemplate& tmpl,
                                                          std::span<const double> params,
                                                          std::span<const double> features,
                                                          const MeasurementPlan& plan,
                                                          std::span<const double> weights);

GradientResult gradient(const circuit::CircuitTemplate& tmpl, std::span<const double> params,
                        std::span<const BatchItem> batch, const MeasurementPlan& plan, LossKind kind,
                        GradientMode mode);

struct EpochRecord {
    int epoch = 0;
    double train_loss = 0.0;
    double val_acc = 0.0;
    double val_auc = 0.0;  // NaN when the validation split lacks a class
};

/// Everything needed to continue a run exactly where it stopped.
struct TrainState {
    std::vector<double> params;
    Adam adam;
    int next_epoch = 0;
    std::vector<double> best_params;
    double best_score = -1.0;  // validation AUC of best_params (ACC when AUC is undefined)
    double best_acc = -1.0;    // tie-break between equal scores
    int best_epoch = -1;
    std::vector<EpochRecord> history;
};

struct TrainResult {
    circuit::ParameterVector best;
    TrainState state;
};

/// Seeded initial parameters, uniform in [-pi, pi).
std::vector<double> initial_parameters(std::size_t n, std::uint64_t seed);

/// Train/validation index split: Validation-tagged samples if any exist,
/// otherwise a seeded `validation_fraction` hold-out of the Train samples.
void split_train_validation(const data::PreparedDataset& dataset, const TrainConfig& config,
                            std::vector<std::size_t>& train_idx, std::vector<std::size_t>& val_idx);

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Adam over seeded per-epoch shuffles; keeps the parameters with the best
/// validation AUC (ACC when AUC is undefined). `stop_after_epoch` ends the
/// run early without changing the trajectory, for resumable runs.
TrainResult train(const circuit::CircuitTemplate& tmpl, const data::PreparedDataset& dataset,
                  const MeasurementPlan& plan, const TrainConfig& config, std::optional<TrainState> resume = {},
                  const EpochCallback& on_epoch = {}, std::optional<int> stop_after_epoch = {});

std::string write_state(const TrainState& state);
TrainState parse_state(const std::string& text);

}  // namespace vqc::train
