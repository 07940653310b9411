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

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vqc::sim {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 12;

enum class GateKind { RX, RY, RZ, H, S, X, Y, Z, CNOT };

const char* gate_name(GateKind kind) noexcept;
std::optional<GateKind> parse_gate_name(const std::string& name) noexcept;

constexpr bool is_rotation(GateKind kind) noexcept {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
}

/// One gate of a circuit stream. `target` is the only qubit for 1q gates and
/// the target for CNOT; `control` is set only for CNOT. `angle` is meaningful
/// only for rotations.
struct GateOp {
    GateKind kind = GateKind::X;
    int target = 0;
    int control = -1;
    double angle = 0.0;

    static GateOp rotation(GateKind axis, int qubit, double angle);
    static GateOp fixed(GateKind kind, int qubit);
    static GateOp cnot(int control, int target);

    int arity() const noexcept { return kind == GateKind::CNOT ? 2 : 1; }

    friend bool operator==(const GateOp&, const GateOp&) = default;
};

std::string to_string(const GateOp& gate);

/// Dense statevector. Basis index bit q holds qubit q (little-endian).
class StateVector {
  public:
    /// |0...0> on n qubits; throws a configuration error outside 1..=12.
    explicit StateVector(int n_qubits);

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t dimension() const noexcept { return amps_.size(); }

    std::span<const Complex> amplitudes() const noexcept { return amps_; }
    std::span<Complex> amplitudes() noexcept { return amps_; }

    double norm_squared() const noexcept;

    void apply(const GateOp& gate);
    void apply(std::span<const GateOp> gates);

    /// Applies the inverse of `gate`.
    void apply_adjoint(const GateOp& gate);

    /// Applies a Pauli (X, Y or Z) on `qubit` without validation.
    void apply_pauli(GateKind pauli, int qubit) noexcept;

    /// <psi|other>
    Complex inner(const StateVector& other) const;

  private:
    void check_gate(const GateOp& gate) const;
    void apply_1q(int qubit, const Complex m[4]) noexcept;
    void apply_cnot(int control, int target) noexcept;

    int n_qubits_;
    std::vector<Complex> amps_;
};

/// Measured-bitstring weights. For `measured = [m0, m1, ...]`, the rightmost
/// character of a key is the outcome of m0. `total_shots == 0` marks a
/// probability (or quasi-probability) distribution rather than counts.
struct CountsDistribution {
    int n_measured = 0;
    std::map<std::string, double> entries;
    std::uint64_t total_shots = 0;

    double total_weight() const noexcept;
    /// Weights divided by their total (or unchanged if already probabilities).
    CountsDistribution normalized() const;

    friend bool operator==(const CountsDistribution&, const CountsDistribution&) = default;
};

/// Bitstring for outcome index `index` over `n_measured` bits (bit j of the
/// index = measured qubit j = j-th character from the right).
std::string outcome_key(std::uint64_t index, int n_measured);
std::uint64_t outcome_index(const std::string& key);

/// Builds a CountsDistribution from dense per-outcome weights, dropping zeros.
CountsDistribution make_distribution(std::span<const double> weights, int n_measured,
                                     std::uint64_t total_shots);

StateVector init_state(int n_qubits);
StateVector apply_gate(StateVector state, const GateOp& gate);
StateVector run_circuit(int n_qubits, std::span<const GateOp> gates);

/// P(qubit=0) - P(qubit=1).
double expectation_z(const StateVector& state, int qubit);

/// Dense marginal over `measured`, indexed like `outcome_key`.
std::vector<double> marginal_probabilities(const StateVector& state,
                                           std::span<const int> measured);

CountsDistribution exact_probabilities(const StateVector& state, std::span<const int> measured);

/// Draws one outcome index from the cumulative distribution `cdf` given a
/// uniform variate in [0, 1).
std::uint64_t draw_from_cdf(std::span<const double> cdf, double u) noexcept;
std::vector<double> cumulative(std::span<const double> probabilities);

/// Shot `i` draws its outcome from an Rng seeded with
/// derive_seed(seed, "measure", i); the noise engine uses the same stream.
std::vector<std::uint64_t> sample_histogram(const StateVector& state, std::span<const int> measured,
                                           std::uint64_t shots, std::uint64_t seed);
CountsDistribution sample_counts(const StateVector& state, std::span<const int> measured,
                                 std::uint64_t shots, std::uint64_t seed);

void check_measured(std::span<const int> measured, int n_qubits);

}  // namespace vqc::sim
