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

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "core/circuit/device.hpp"
#include "core/sim/statevector.hpp"

namespace vqc::mitigation {

/// Per-measured-qubit confusion matrices; entry j belongs to the j-th
/// rightmost bit of an outcome key.
struct ReadoutCalibration {
    std::vector<circuit::Confusion> qubits;

    std::size_t size() const noexcept { return qubits.size(); }
    void validate() const;
};

struct QuasiDistribution {
    int n_measured = 0;
    std::map<std::string, double> entries;
    double raw_total = 0.0;
    std::size_t iterations = 0;
    double residual = 0.0;

    double total_weight() const noexcept;
};

/// Solves the tensor-product confusion system restricted to the observed keys
/// by Jacobi iteration. Columns of the restricted matrix are renormalized over
/// the observed set, so the solution carries the same total as the input.
QuasiDistribution mitigate(const sim::CountsDistribution& raw, const ReadoutCalibration& cal, double tol = 1e-6,
                           std::size_t max_iter = 1000);

/// Restricted matrices up to this many keys are cached; larger ones are
/// evaluated entry by entry on every sweep.
inline constexpr std::size_t kDenseCacheLimit = 2048;

std::vector<double> expectations_from_quasi(const QuasiDistribution& q, int n_measured);
std::vector<double> expectations_from_counts(const sim::CountsDistribution& counts, int n_measured);

ReadoutCalibration parse_calibration(const std::string& text);
std::string write_calibration(const ReadoutCalibration& cal);
ReadoutCalibration load_calibration(const std::string& path);

/// One `bitstring weight` pair per line; `#` starts a comment.
sim::CountsDistribution parse_counts(const std::string& text);
std::string write_counts(const sim::CountsDistribution& counts);
std::string write_quasi(const QuasiDistribution& q);

}  // namespace vqc::mitigation
