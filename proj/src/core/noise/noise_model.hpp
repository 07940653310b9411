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
#include <span>
#include <vector>

#include "core/circuit/device.hpp"
#include "core/sim/statevector.hpp"

namespace vqc::noise {

using circuit::Confusion;

inline constexpr double kDefaultKappaDD = 0.25;

/// Stochastic noise applied by `noisy_sample`. Readout matrices are indexed by
/// local (circuit) qubit; qubits without an entry read out perfectly.
struct NoiseModel {
    double p_dep_1q = 0.0;
    double p_dep_2q = 0.0;
    double p_idle = 0.0;
    double epsilon_coherent = 0.0;
    std::vector<Confusion> readout_confusion;
    bool dd_enabled = false;
    bool twirling_enabled = false;
    double kappa_dd = kDefaultKappaDD;

    void validate() const;
    bool is_ideal() const noexcept;

    /// Error figures of `device`, readout taken from the device qubits in
    /// `layout` (local qubit i -> layout[i]).
    static NoiseModel from_device(const circuit::DeviceDescription& device, std::span<const int> layout);

    friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

/// Folds DD and twirling into plain noise figures. The result has both flags
/// cleared, so applying it twice is the same as once.
NoiseModel effective_noise(const NoiseModel& noise);

/// ASAP layer of every gate in `gates` (0-based).
std::vector<std::size_t> gate_layers(int n_qubits, std::span<const sim::GateOp> gates);

/// Per-shot Monte-Carlo trajectories. Shot i draws noise events from
/// derive_seed(seed, "noise", i) and its measurement from
/// derive_seed(seed, "measure", i), so an ideal model reproduces
/// `sim::sample_histogram` exactly.
std::vector<std::uint64_t> noisy_histogram(int n_qubits, std::span<const sim::GateOp> gates,
                                           std::span<const int> measured, std::uint64_t shots,
                                           const NoiseModel& noise, std::uint64_t seed);

sim::CountsDistribution noisy_sample(int n_qubits, std::span<const sim::GateOp> gates,
                                     std::span<const int> measured, std::uint64_t shots,
                                     const NoiseModel& noise, std::uint64_t seed);

/// Empirical per-qubit confusion from |0...0> and |1...1> preparations run
/// through `noisy_sample` (one entry per readout matrix of `noise`).
std::vector<Confusion> calibrate_readout(const NoiseModel& noise, std::uint64_t shots, std::uint64_t seed);

}  // namespace vqc::noise
