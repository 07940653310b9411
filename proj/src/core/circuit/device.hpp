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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vqc::circuit {

/// 2x2 readout confusion matrix, entry [observed][true]. Each column is the
/// distribution of observed outcomes for one prepared state.
using Confusion = std::array<std::array<double, 2>, 2>;

constexpr Confusion identity_confusion() noexcept { return {{{1.0, 0.0}, {0.0, 1.0}}}; }

/// Confusion matrix with P(read 1 | true 0) = p01 and P(read 0 | true 1) = p10.
constexpr Confusion flip_confusion(double p01, double p10) noexcept {
    return {{{1.0 - p01, p10}, {p01, 1.0 - p10}}};
}

/// Throws a validation error unless entries are non-negative and each column
/// sums to 1 within 1e-9.
void check_confusion(const Confusion& c, int qubit);

struct Edge {
    int a = 0;
    int b = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Target backend: coupling graph, readout confusion, and gate error figures.
struct DeviceDescription {
    int n_qubits = 0;
    std::vector<Edge> coupling_edges;
    std::vector<Confusion> readout_confusion;
    double p_dep_1q = 0.0;
    double p_dep_2q = 0.0;
    double p_idle = 0.0;
    double epsilon_coherent = 0.0;

    bool has_edge(int a, int b) const noexcept;
    std::vector<std::vector<int>> adjacency() const;
    /// Mean of the two off-diagonal readout flip probabilities of `qubit`.
    double readout_error(int qubit) const;

    void validate() const;

    friend bool operator==(const DeviceDescription&, const DeviceDescription&) = default;
};

/// 16-qubit heavy-hex fragment with representative NISQ error figures.
DeviceDescription bundled_device();

std::string write_device(const DeviceDescription& device);
DeviceDescription parse_device(const std::string& text);
DeviceDescription load_device(const std::string& path);
void save_device(const DeviceDescription& device, const std::string& path);

}  // namespace vqc::circuit
