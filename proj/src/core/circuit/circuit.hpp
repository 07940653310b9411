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
#include <optional>
#include <string>
#include <vector>

#include "core/circuit/device.hpp"
#include "core/sim/statevector.hpp"

namespace vqc::circuit {

using sim::GateKind;
using sim::GateOp;

/// Rotation slot: a single-qubit rotation whose angle is supplied at bind time.
struct RotationSlot {
    int qubit = 0;
    GateKind axis = GateKind::RY;
    friend bool operator==(const RotationSlot&, const RotationSlot&) = default;
};

/// CNOT placed before variational slot `position` (position == n_params
/// appends after the last variational rotation).
struct Entangler {
    int position = 0;
    int control = 0;
    int target = 1;
    friend bool operator==(const Entangler&, const Entangler&) = default;
};

/// Encoding rotations, variational ansatz and measured qubits over
/// `n_qubits` local qubits. `layout[i]` is the device qubit backing local qubit
/// i; entanglers are in local indices.
struct CircuitTemplate {
    std::uint64_t id = 0;
    int n_qubits = 1;
    std::vector<int> layout;
    std::vector<RotationSlot> embedding_slots;
    std::vector<RotationSlot> variational_slots;
    std::vector<Entangler> entanglers;
    std::vector<int> measured_qubits;

    std::size_t n_embed() const noexcept { return embedding_slots.size(); }
    std::size_t n_params() const noexcept { return variational_slots.size(); }
    std::size_t gate_count() const noexcept {
        return embedding_slots.size() + variational_slots.size() + entanglers.size();
    }

    /// Structural checks independent of any device.
    void validate() const;

    friend bool operator==(const CircuitTemplate&, const CircuitTemplate&) = default;
};

struct ParameterVector {
    std::vector<double> values;
    friend bool operator==(const ParameterVector&, const ParameterVector&) = default;
};

/// Encoded features. Construction through `make` enforces the [0, pi] range.
class FeatureVector {
  public:
    FeatureVector() = default;
    static FeatureVector make(std::vector<double> values);

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

  private:
    explicit FeatureVector(std::vector<double> values) : values_(std::move(values)) {}
    std::vector<double> values_;
};

/// Gate stream: embedding rotations, then variational rotations with
/// entanglers interleaved at their recorded positions.
std::vector<GateOp> bind(const CircuitTemplate& tmpl, const std::vector<double>& features,
                         const std::vector<double>& params);
std::vector<GateOp> bind(const CircuitTemplate& tmpl, const FeatureVector& features,
                         const ParameterVector& params);

/// Index into the bound stream of each variational rotation, in slot order.
std::vector<std::size_t> variational_stream_indices(const CircuitTemplate& tmpl);

/// Every rotation angle drawn uniformly from {0, pi/2, pi, 3pi/2}.
std::vector<GateOp> clifford_replica(const CircuitTemplate& tmpl, std::uint64_t seed);

struct Violation {
    std::string what;
    std::optional<Entangler> entangler;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const noexcept { return violations.empty(); }
    std::string to_string() const;
};

ValidationReport validate_against_device(const CircuitTemplate& tmpl,
                                         const DeviceDescription& device);

/// Depth of the bound gate stream under ASAP layering.
std::size_t circuit_depth(const CircuitTemplate& tmpl);

struct CircuitDocument {
    CircuitTemplate tmpl;
    std::optional<ParameterVector> params;
    /// Free-form "# key value" provenance lines, written verbatim after the
    /// version header.
    std::vector<std::string> header_comments;

    friend bool operator==(const CircuitDocument&, const CircuitDocument&) = default;
};

std::string serialize(const CircuitDocument& doc);
CircuitDocument deserialize(const std::string& text);

CircuitDocument load_circuit(const std::string& path);
void save_circuit(const CircuitDocument& doc, const std::string& path);

}  // namespace vqc::circuit
