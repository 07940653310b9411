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

#include <map>
#include <span>
#include <string>
#include <vector>

#include "core/train/plan.hpp"

namespace vqc::metrics {

using Matrix = std::vector<std::vector<double>>;

/// Binary: correct iff |<Z> - y| < 1 with y = 1 - 2 label. Otherwise the
/// plan's predict_class must match the label.
double accuracy(const Matrix& expectations, const std::vector<int>& labels, const train::MeasurementPlan& plan);

/// Mann-Whitney statistic with ties counted as 1/2. Labels > 0 are positive.
double auc_binary(std::span<const double> scores, std::span<const int> labels);

enum class Averaging { Macro, Weighted };

/// Row-wise softmax of `scores`, then one-vs-rest binary AUC per class.
double auc_multiclass(const Matrix& scores, const std::vector<int>& labels, int n_classes,
                      Averaging averaging = Averaging::Macro);

std::vector<double> softmax(std::span<const double> scores);

struct EvaluationReport {
    double acc = 0.0;
    double auc = 0.0;
    std::size_t n_samples = 0;
    std::vector<std::size_t> per_class_total;
    std::vector<std::size_t> per_class_correct;
    std::map<std::string, std::string> fingerprint;
};

/// ACC/AUC under the plan's rules: binary AUC on <Z> with class 0 positive,
/// multi-class AUC on `train::class_scores`.
EvaluationReport evaluate(const Matrix& expectations, const std::vector<int>& labels,
                          const train::MeasurementPlan& plan, Averaging averaging = Averaging::Macro);

}  // namespace vqc::metrics
