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

#include "core/sim/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace vqc::sim {

namespace {

constexpr Complex kI{0.0, 1.0};

void rotation_matrix(GateKind axis, double angle, Complex m[4]) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    switch (axis) {
        case GateKind::RX:
            m[0] = c; m[1] = -kI * s;
            m[2] = -kI * s; m[3] = c;
            break;
        case GateKind::RY:
            m[0] = c; m[1] = -s;
            m[2] = s; m[3] = c;
            break;
        default:
            m[0] = Complex{c, -s}; m[1] = 0.0;
            m[2] = 0.0; m[3] = Complex{c, s};
            break;
    }
}

void fixed_matrix(GateKind kind, bool adjoint, Complex m[4]) {
    const double r = std::numbers::sqrt2 / 2.0;
    switch (kind) {
        case GateKind::H: m[0] = r; m[1] = r; m[2] = r; m[3] = -r; break;
        case GateKind::S: m[0] = 1.0; m[1] = 0.0; m[2] = 0.0; m[3] = adjoint ? -kI : kI; break;
        case GateKind::X: m[0] = 0.0; m[1] = 1.0; m[2] = 1.0; m[3] = 0.0; break;
        case GateKind::Y: m[0] = 0.0; m[1] = -kI; m[2] = kI; m[3] = 0.0; break;
        default: m[0] = 1.0; m[1] = 0.0; m[2] = 0.0; m[3] = -1.0; break;
    }
}

}  // namespace

const char* gate_name(GateKind kind) noexcept {
    switch (kind) {
        case GateKind::RX: return "RX";
        case GateKind::RY: return "RY";
        case GateKind::RZ: return "RZ";
        case GateKind::H: return "H";
        case GateKind::S: return "S";
        case GateKind::X: return "X";
        case GateKind::Y: return "Y";
        case GateKind::Z: return "Z";
        case GateKind::CNOT: return "CNOT";
    }
    return "?";
}

std::optional<GateKind> parse_gate_name(const std::string& name) noexcept {
    for (GateKind k : {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::H, GateKind::S,
                       GateKind::X, GateKind::Y, GateKind::Z, GateKind::CNOT}) {
        if (name == gate_name(k)) return k;
    }
    return std::nullopt;
}

GateOp GateOp::rotation(GateKind axis, int qubit, double angle) {
    if (!is_rotation(axis)) fail(ErrorKind::Validation, "rotation gate requires RX, RY or RZ");
    return GateOp{axis, qubit, -1, angle};
}

GateOp GateOp::fixed(GateKind kind, int qubit) {
    if (is_rotation(kind) || kind == GateKind::CNOT) {
        fail(ErrorKind::Validation, std::string("not a fixed 1q gate: ") + gate_name(kind));
    }
    return GateOp{kind, qubit, -1, 0.0};
}

GateOp GateOp::cnot(int control, int target) { return GateOp{GateKind::CNOT, target, control, 0.0}; }

std::string to_string(const GateOp& gate) {
    std::string out = gate_name(gate.kind);
    if (gate.kind == GateKind::CNOT) {
        return out + " q" + std::to_string(gate.control) + ",q" + std::to_string(gate.target);
    }
    if (is_rotation(gate.kind)) out += "(" + std::to_string(gate.angle) + ")";
    return out + " q" + std::to_string(gate.target);
}

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        fail(ErrorKind::Config, "n_qubits must be in 1..=12, got " + std::to_string(n_qubits));
    }
    amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amps_[0] = 1.0;
}

double StateVector::norm_squared() const noexcept {
    double total = 0.0;
    for (const Complex& a : amps_) total += std::norm(a);
    return total;
}

void StateVector::check_gate(const GateOp& gate) const {
    auto bad = [&](int q) { return q < 0 || q >= n_qubits_; };
    if (bad(gate.target)) {
        fail(ErrorKind::Index, "gate " + to_string(gate) + " targets qubit outside 0.." +
                                   std::to_string(n_qubits_ - 1));
    }
    if (gate.kind == GateKind::CNOT) {
        if (bad(gate.control)) {
            fail(ErrorKind::Index, "gate " + to_string(gate) + " control outside register");
        }
        if (gate.control == gate.target) {
            fail(ErrorKind::Validation, "CNOT control and target must differ");
        }
    }
}

void StateVector::apply_1q(int qubit, const Complex m[4]) noexcept {
    const std::size_t stride = std::size_t{1} << qubit;
    const std::size_t dim = amps_.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const Complex a0 = amps_[i];
            const Complex a1 = amps_[i + stride];
            amps_[i] = m[0] * a0 + m[1] * a1;
            amps_[i + stride] = m[2] * a0 + m[3] * a1;
        }
    }
}

void StateVector::apply_cnot(int control, int target) noexcept {
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    const std::size_t dim = amps_.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & cmask) && !(i & tmask)) std::swap(amps_[i], amps_[i | tmask]);
    }
}

void StateVector::apply_pauli(GateKind pauli, int qubit) noexcept {
    const std::size_t mask = std::size_t{1} << qubit;
    const std::size_t dim = amps_.size();
    switch (pauli) {
        case GateKind::X:
            for (std::size_t i = 0; i < dim; ++i) {
                if (!(i & mask)) std::swap(amps_[i], amps_[i | mask]);
            }
            break;
        case GateKind::Y:
            for (std::size_t i = 0; i < dim; ++i) {
                if (!(i & mask)) {
                    const Complex a0 = amps_[i];
                    amps_[i] = -kI * amps_[i | mask];
                    amps_[i | mask] = kI * a0;
                }
            }
            break;
        default:
            for (std::size_t i = 0; i < dim; ++i) {
                if (i & mask) amps_[i] = -amps_[i];
            }
            break;
    }
}

void StateVector::apply(const GateOp& gate) {
    check_gate(gate);
    if (gate.kind == GateKind::CNOT) {
        apply_cnot(gate.control, gate.target);
        return;
    }
    Complex m[4];
    if (is_rotation(gate.kind)) {
        rotation_matrix(gate.kind, gate.angle, m);
    } else {
        fixed_matrix(gate.kind, false, m);
    }
    apply_1q(gate.target, m);
}

void StateVector::apply(std::span<const GateOp> gates) {
    for (const GateOp& g : gates) apply(g);
}

void StateVector::apply_adjoint(const GateOp& gate) {
    check_gate(gate);
    if (gate.kind == GateKind::CNOT) {
        apply_cnot(gate.control, gate.target);
        return;
    }
    Complex m[4];
    if (is_rotation(gate.kind)) {
        rotation_matrix(gate.kind, -gate.angle, m);
    } else {
        fixed_matrix(gate.kind, true, m);
    }
    apply_1q(gate.target, m);
}

Complex StateVector::inner(const StateVector& other) const {
    if (other.n_qubits_ != n_qubits_) fail(ErrorKind::Validation, "inner product of mismatched registers");
    Complex total{0.0, 0.0};
    for (std::size_t i = 0; i < amps_.size(); ++i) total += std::conj(amps_[i]) * other.amps_[i];
    return total;
}

double CountsDistribution::total_weight() const noexcept {
    double total = 0.0;
    for (const auto& [key, w] : entries) total += w;
    return total;
}

CountsDistribution CountsDistribution::normalized() const {
    CountsDistribution out{n_measured, entries, 0};
    const double total = total_weight();
    if (total == 0.0) fail(ErrorKind::Validation, "cannot normalize an empty distribution");
    for (auto& [key, w] : out.entries) w /= total;
    return out;
}

std::string outcome_key(std::uint64_t index, int n_measured) {
    std::string key(static_cast<std::size_t>(n_measured), '0');
    for (int j = 0; j < n_measured; ++j) {
        if ((index >> j) & 1U) key[static_cast<std::size_t>(n_measured - 1 - j)] = '1';
    }
    return key;
}

std::uint64_t outcome_index(const std::string& key) {
    std::uint64_t index = 0;
    const std::size_t n = key.size();
    for (std::size_t c = 0; c < n; ++c) {
        if (key[c] == '1') {
            index |= std::uint64_t{1} << (n - 1 - c);
        } else if (key[c] != '0') {
            fail(ErrorKind::Validation, "bitstring key '" + key + "' contains a non-binary character");
        }
    }
    return index;
}

CountsDistribution make_distribution(std::span<const double> weights, int n_measured,
                                     std::uint64_t total_shots) {
    CountsDistribution out{n_measured, {}, total_shots};
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] != 0.0) out.entries.emplace(outcome_key(i, n_measured), weights[i]);
    }
    return out;
}

StateVector init_state(int n_qubits) { return StateVector(n_qubits); }

StateVector apply_gate(StateVector state, const GateOp& gate) {
    state.apply(gate);
    return state;
}

StateVector run_circuit(int n_qubits, std::span<const GateOp> gates) {
    StateVector state(n_qubits);
    state.apply(gates);
    return state;
}

double expectation_z(const StateVector& state, int qubit) {
    if (qubit < 0 || qubit >= state.n_qubits()) {
        fail(ErrorKind::Index, "expectation_z qubit " + std::to_string(qubit) + " out of range");
    }
    const std::size_t mask = std::size_t{1} << qubit;
    double value = 0.0;
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        value += (i & mask) ? -p : p;
    }
    return value;
}

void check_measured(std::span<const int> measured, int n_qubits) {
    for (std::size_t j = 0; j < measured.size(); ++j) {
        if (measured[j] < 0 || measured[j] >= n_qubits) {
            fail(ErrorKind::Index, "measured qubit " + std::to_string(measured[j]) + " out of range");
        }
        for (std::size_t k = 0; k < j; ++k) {
            if (measured[k] == measured[j]) {
                fail(ErrorKind::Validation,
                     "duplicate measured qubit " + std::to_string(measured[j]));
            }
        }
    }
}

std::vector<double> marginal_probabilities(const StateVector& state, std::span<const int> measured) {
    check_measured(measured, state.n_qubits());
    std::vector<double> probs(std::size_t{1} << measured.size(), 0.0);
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        std::size_t outcome = 0;
        for (std::size_t j = 0; j < measured.size(); ++j) {
            outcome |= ((i >> measured[j]) & 1U) << j;
        }
        probs[outcome] += std::norm(amps[i]);
    }
    return probs;
}

CountsDistribution exact_probabilities(const StateVector& state, std::span<const int> measured) {
    const auto probs = marginal_probabilities(state, measured);
    return make_distribution(probs, static_cast<int>(measured.size()), 0);
}

std::vector<double> cumulative(std::span<const double> probabilities) {
    std::vector<double> cdf(probabilities.size());
    double running = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        running += probabilities[i];
        cdf[i] = running;
    }
    return cdf;
}

std::uint64_t draw_from_cdf(std::span<const double> cdf, double u) noexcept {
    // Scale by the total so rounding in the cumulative sum never leaves a gap
    // at the top end.
    const double target = u * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    if (it == cdf.end()) {
        // u * total landed on the final boundary; pick the last non-empty outcome.
        std::size_t last = cdf.size() - 1;
        while (last > 0 && cdf[last] == cdf[last - 1]) --last;
        return last;
    }
    return static_cast<std::uint64_t>(it - cdf.begin());
}

std::vector<std::uint64_t> sample_histogram(const StateVector& state, std::span<const int> measured,
                                            std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) fail(ErrorKind::Validation, "shots must be >= 1");
    const auto cdf = cumulative(marginal_probabilities(state, measured));
    std::vector<std::uint64_t> hist(cdf.size(), 0);
    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        Rng rng(derive_seed(seed, "measure", shot));
        ++hist[draw_from_cdf(cdf, rng.uniform())];
    }
    return hist;
}

CountsDistribution sample_counts(const StateVector& state, std::span<const int> measured,
                                 std::uint64_t shots, std::uint64_t seed) {
    const auto hist = sample_histogram(state, measured, shots, seed);
    std::vector<double> weights(hist.begin(), hist.end());
    return make_distribution(weights, static_cast<int>(measured.size()), shots);
}

}  // namespace vqc::sim
