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

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace vqc::train {

struct AdamSettings {
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Bias-corrected Adam. State is public so checkpoints can persist it.
struct Adam {
    std::vector<double> m;
    std::vector<double> v;
    std::size_t step_count = 0;

    explicit Adam(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}

    void step(std::span<double> params, std::span<const double> grad, const AdamSettings& s) {
        ++step_count;
        const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(step_count));
        const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(step_count));
        for (std::size_t i = 0; i < params.size(); ++i) {
            m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * grad[i];
            v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * grad[i] * grad[i];
            params[i] -= s.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + s.epsilon);
        }
    }
};

}  // namespace vqc::train
