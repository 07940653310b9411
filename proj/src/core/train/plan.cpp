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

#include "core/train/plan.hpp"

#include <string>

#include "core/error.hpp"

namespace vqc::train {

int measured_count_for(int n_classes) {
    if (n_classes < 2) fail(ErrorKind::Config, "classification needs at least 2 classes");
    if (n_classes == 2) return 1;
    if (n_classes == 4) return 2;
    return n_classes;
}

MeasurementPlan MeasurementPlan::for_classes(int n_classes, std::span<const int> template_measured) {
    const int k = measured_count_for(n_classes);
    if (template_measured.size() < static_cast<std::size_t>(k)) {
        fail(ErrorKind::Config, std::to_string(n_classes) + " classes need " + std::to_string(k) +
                                    " measured qubits, template lists " + std::to_string(template_measured.size()));
    }
    MeasurementPlan plan;
    plan.n_classes = n_classes;
    plan.kind = n_classes == 2 ? TaskKind::Binary : n_classes == 4 ? TaskKind::FourClass : TaskKind::MultiClass;
    plan.measured_qubits.assign(template_measured.end() - k, template_measured.end());
    return plan;
}

std::vector<double> MeasurementPlan::target(int label) const {
    if (label < 0 || label >= n_classes) {
        fail(ErrorKind::Validation, "label " + std::to_string(label) + " outside 0.." + std::to_string(n_classes - 1));
    }
    switch (kind) {
        case TaskKind::Binary: return {1.0 - 2.0 * label};
        case TaskKind::FourClass: return {1.0 - 2.0 * ((label >> 1) & 1), 1.0 - 2.0 * (label & 1)};
        case TaskKind::MultiClass: {
            std::vector<double> t(static_cast<std::size_t>(n_classes), -1.0);
            t[static_cast<std::size_t>(label)] = 1.0;
            return t;
        }
    }
    return {};
}

std::vector<double> class_scores(std::span<const double> e, const MeasurementPlan& plan) {
    if (e.size() != plan.n_measured()) fail(ErrorKind::Validation, "expectation vector length does not match plan");
    std::vector<double> scores;
    switch (plan.kind) {
        case TaskKind::Binary:
            // Class 0 is the +1 target.
            scores = {e[0], -e[0]};
            break;
        case TaskKind::FourClass:
            for (int c = 0; c < 4; ++c) {
                const auto t = plan.target(c);
                const double d0 = e[0] - t[0], d1 = e[1] - t[1];
                scores.push_back(-(d0 * d0 + d1 * d1));
            }
            break;
        case TaskKind::MultiClass:
            scores.assign(e.begin(), e.end());
            break;
    }
    return scores;
}

int predict_class(std::span<const double> e, const MeasurementPlan& plan) {
    if (plan.kind == TaskKind::Binary) {
        if (e.size() != 1) fail(ErrorKind::Validation, "binary prediction takes one expectation");
        if (e[0] > 0.0) return 0;
        if (e[0] < 0.0) return 1;
        return kNoClass;
    }
    const auto scores = class_scores(e, plan);
    int best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c) {
        if (scores[c] > scores[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
    }
    return best;
}

}  // namespace vqc::train
