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

#include <span>
#include <vector>

namespace vqc::train {

enum class TaskKind { Binary, FourClass, MultiClass };

/// How class labels map onto measured-qubit expectations.
///   Binary: 1 qubit, label l -> target 1 - 2l.
///   FourClass: 2 qubits, label bits (b1, b0) -> (1 - 2 b1, 1 - 2 b0).
///   MultiClass: one qubit per class, scores are the raw expectations.
struct MeasurementPlan {
    int n_classes = 2;
    TaskKind kind = TaskKind::Binary;
    std::vector<int> measured_qubits;

    /// Takes the last k entries of `template_measured`, k from the class count.
    static MeasurementPlan for_classes(int n_classes, std::span<const int> template_measured);

    std::size_t n_measured() const noexcept { return measured_qubits.size(); }
    std::vector<double> target(int label) const;
};

/// 2 -> 1, 4 -> 2, otherwise n_classes.
int measured_count_for(int n_classes);

inline constexpr int kNoClass = -1;

/// Binary: sign rule (exact zero -> kNoClass); FourClass: nearest corner;
/// MultiClass: argmax. Ties go to the lower class index.
int predict_class(std::span<const double> expectations, const MeasurementPlan& plan);

/// Per-class scores used for multi-class AUC: negative squared distance to
/// each corner for FourClass, the expectations themselves for MultiClass.
std::vector<double> class_scores(std::span<const double> expectations, const MeasurementPlan& plan);

}  // namespace vqc::train
