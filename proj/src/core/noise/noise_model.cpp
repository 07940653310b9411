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

#include "core/noise/noise_model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace vqc::noise {

using sim::GateKind;
using sim::GateOp;
using sim::StateVector;

void NoiseModel::validate() const {
    for (double p : {p_dep_1q, p_dep_2q, p_idle}) {
        if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::Validation, "noise probabilities must lie in [0, 1]");
    }
    if (!std::isfinite(epsilon_coherent)) fail(ErrorKind::Validation, "epsilon_coherent must be finite");
    if (!(kappa_dd >= 0.0 && kappa_dd <= 1.0)) fail(ErrorKind::Validation, "kappa_dd must lie in [0, 1]");
    for (std::size_t q = 0; q < readout_confusion.size(); ++q) {
        circuit::check_confusion(readout_confusion[q], static_cast<int>(q));
    }
}

bool NoiseModel::is_ideal() const noexcept {
    const bool readout_ideal = std::all_of(readout_confusion.begin(), readout_confusion.end(),
                                           [](const Confusion& c) { return c == circuit::identity_confusion(); });
    return p_dep_1q == 0.0 && p_dep_2q == 0.0 && p_idle == 0.0 && epsilon_coherent == 0.0 && readout_ideal;
}

NoiseModel NoiseModel::from_device(const circuit::DeviceDescription& device, std::span<const int> layout) {
    NoiseModel m;
    m.p_dep_1q = device.p_dep_1q;
    m.p_dep_2q = device.p_dep_2q;
    m.p_idle = device.p_idle;
    m.epsilon_coherent = device.epsilon_coherent;
    for (int q : layout) {
        if (q < 0 || q >= device.n_qubits) fail(ErrorKind::Index, "layout qubit " + std::to_string(q) + " not on device");
        m.readout_confusion.push_back(device.readout_confusion[static_cast<std::size_t>(q)]);
    }
    return m;
}

NoiseModel effective_noise(const NoiseModel& noise) {
    NoiseModel out = noise;
    if (noise.dd_enabled) out.p_idle = noise.kappa_dd * noise.p_idle;
    if (noise.twirling_enabled) {
        const double s = std::sin(noise.epsilon_coherent / 2.0);
        out.p_dep_1q = std::min(1.0, noise.p_dep_1q + s * s);
        out.epsilon_coherent = 0.0;
    }
    out.dd_enabled = false;
    out.twirling_enabled = false;
    return out;
}

std::vector<std::size_t> gate_layers(int n_qubits, std::span<const GateOp> gates) {
    std::vector<std::size_t> next_free(static_cast<std::size_t>(n_qubits), 0);
    std::vector<std::size_t> layers;
    layers.reserve(gates.size());
    for (const GateOp& g : gates) {
        std::size_t l = next_free[static_cast<std::size_t>(g.target)];
        if (g.kind == GateKind::CNOT) l = std::max(l, next_free[static_cast<std::size_t>(g.control)]);
        layers.push_back(l);
        next_free[static_cast<std::size_t>(g.target)] = l + 1;
        if (g.kind == GateKind::CNOT) next_free[static_cast<std::size_t>(g.control)] = l + 1;
    }
    return layers;
}

namespace {

enum class SlotKind : std::uint8_t { Depolarize, Dephase };

// A place where a noise event may occur: just before gate `before_gate`
// (== gates.size() for the end of the circuit).
struct Slot {
    std::size_t before_gate;
    int qubit;
    SlotKind kind;
};

struct Event {
    std::size_t slot;
    GateKind pauli;
};

class TrajectorySampler {
  public:
    TrajectorySampler(int n_qubits, std::span<const GateOp> gates, std::span<const int> measured,
                      const NoiseModel& noise)
        : n_qubits_(n_qubits), measured_(measured.begin(), measured.end()), noise_(noise) {
        gates_.assign(gates.begin(), gates.end());
        for (GateOp& g : gates_) {
            if (sim::is_rotation(g.kind)) g.angle += noise_.epsilon_coherent;
        }
        build_slots();
        // Gate-by-gate prefix states, so a trajectory only re-simulates the
        // suffix after its first event.
        StateVector state(n_qubits_);
        prefix_.reserve(gates_.size() + 1);
        prefix_.push_back(state);
        for (const GateOp& g : gates_) {
            state.apply(g);
            prefix_.push_back(state);
        }
        ideal_cdf_ = sim::cumulative(sim::marginal_probabilities(state, measured_));
    }

    std::vector<std::uint64_t> run(std::uint64_t shots, std::uint64_t seed) {
        std::vector<std::uint64_t> hist(ideal_cdf_.size(), 0);
        std::vector<Event> events;
        for (std::uint64_t shot = 0; shot < shots; ++shot) {
            Rng noise_rng(derive_seed(seed, "noise", shot));
            draw_events(noise_rng, events);
            const std::vector<double>& cdf = trajectory_cdf(events);
            Rng meas_rng(derive_seed(seed, "measure", shot));
            std::uint64_t outcome = sim::draw_from_cdf(cdf, meas_rng.uniform());
            outcome = apply_readout(outcome, meas_rng);
            ++hist[outcome];
        }
        return hist;
    }

  private:
    void build_slots() {
        const auto layers = gate_layers(n_qubits_, gates_);
        std::size_t n_layers = 0;
        for (std::size_t l : layers) n_layers = std::max(n_layers, l + 1);

        for (std::size_t i = 0; i < gates_.size(); ++i) {
            const GateOp& g = gates_[i];
            if (g.kind == GateKind::CNOT) {
                slots_2q_.push_back({i + 1, g.control, SlotKind::Depolarize});
                slots_2q_.push_back({i + 1, g.target, SlotKind::Depolarize});
            } else {
                slots_1q_.push_back({i + 1, g.target, SlotKind::Depolarize});
            }
        }
        // Idle slot (layer L, qubit q) sits before q's first gate in a later
        // layer; Z on q commutes with everything in between.
        for (int q = 0; q < n_qubits_; ++q) {
            std::vector<std::pair<std::size_t, std::size_t>> busy;  // (layer, gate index)
            for (std::size_t i = 0; i < gates_.size(); ++i) {
                const GateOp& g = gates_[i];
                if (g.target == q || (g.kind == GateKind::CNOT && g.control == q)) busy.emplace_back(layers[i], i);
            }
            std::size_t b = 0;
            for (std::size_t l = 0; l < n_layers; ++l) {
                if (b < busy.size() && busy[b].first == l) {
                    ++b;
                    continue;
                }
                const std::size_t before = b < busy.size() ? busy[b].second : gates_.size();
                slots_idle_.push_back({before, q, SlotKind::Dephase});
            }
        }
        auto by_position = [](const Slot& a, const Slot& b) { return a.before_gate < b.before_gate; };
        std::stable_sort(slots_idle_.begin(), slots_idle_.end(), by_position);
        all_slots_.insert(all_slots_.end(), slots_1q_.begin(), slots_1q_.end());
        all_slots_.insert(all_slots_.end(), slots_2q_.begin(), slots_2q_.end());
        all_slots_.insert(all_slots_.end(), slots_idle_.begin(), slots_idle_.end());
        offset_2q_ = slots_1q_.size();
        offset_idle_ = offset_2q_ + slots_2q_.size();
    }

    // Geometric skipping over each slot family keeps the cost per shot
    // proportional to the number of events rather than the number of slots.
    static void scan(Rng& rng, std::size_t count, double p, std::size_t offset, bool dephase,
                     std::vector<Event>& events) {
        if (p <= 0.0 || count == 0) return;
        if (p >= 1.0) {
            for (std::size_t i = 0; i < count; ++i) {
                events.push_back({offset + i, dephase ? GateKind::Z : random_pauli(rng)});
            }
            return;
        }
        const double log_q = std::log1p(-p);
        std::size_t i = 0;
        while (true) {
            const double gap = std::floor(std::log1p(-rng.uniform()) / log_q);
            if (gap >= static_cast<double>(count - i)) return;
            i += static_cast<std::size_t>(gap);
            events.push_back({offset + i, dephase ? GateKind::Z : random_pauli(rng)});
            ++i;
            if (i >= count) return;
        }
    }

    static GateKind random_pauli(Rng& rng) {
        switch (rng.below(3)) {
            case 0: return GateKind::X;
            case 1: return GateKind::Y;
            default: return GateKind::Z;
        }
    }

    void draw_events(Rng& rng, std::vector<Event>& events) const {
        events.clear();
        scan(rng, slots_1q_.size(), noise_.p_dep_1q, 0, false, events);
        scan(rng, slots_2q_.size(), noise_.p_dep_2q, offset_2q_, false, events);
        scan(rng, slots_idle_.size(), noise_.p_idle, offset_idle_, true, events);
        if (events.size() > 1) {
            std::stable_sort(events.begin(), events.end(), [&](const Event& a, const Event& b) {
                return all_slots_[a.slot].before_gate < all_slots_[b.slot].before_gate;
            });
        }
    }

    const std::vector<double>& trajectory_cdf(const std::vector<Event>& events) {
        if (events.empty()) return ideal_cdf_;
        if (events.size() == 1) {
            const Slot& s = all_slots_[events[0].slot];
            const std::uint64_t key = (static_cast<std::uint64_t>(s.before_gate) * 64 +
                                       static_cast<std::uint64_t>(s.qubit)) * 4 +
                                      static_cast<std::uint64_t>(events[0].pauli);
            auto it = single_event_cache_.find(key);
            if (it == single_event_cache_.end()) {
                it = single_event_cache_.emplace(key, simulate(events)).first;
            }
            return it->second;
        }
        scratch_cdf_ = simulate(events);
        return scratch_cdf_;
    }

    std::vector<double> simulate(const std::vector<Event>& events) const {
        std::size_t pos = all_slots_[events.front().slot].before_gate;
        StateVector state = prefix_[pos];
        std::size_t e = 0;
        while (true) {
            while (e < events.size() && all_slots_[events[e].slot].before_gate == pos) {
                state.apply_pauli(events[e].pauli, all_slots_[events[e].slot].qubit);
                ++e;
            }
            if (pos == gates_.size()) break;
            state.apply(gates_[pos]);
            ++pos;
        }
        return sim::cumulative(sim::marginal_probabilities(state, measured_));
    }

    std::uint64_t apply_readout(std::uint64_t outcome, Rng& rng) const {
        for (std::size_t j = 0; j < measured_.size(); ++j) {
            const auto q = static_cast<std::size_t>(measured_[j]);
            if (q >= noise_.readout_confusion.size()) continue;
            const Confusion& c = noise_.readout_confusion[q];
            const std::size_t bit = (outcome >> j) & 1U;
            const double flip = c[1 - bit][bit];
            if (flip > 0.0 && rng.uniform() < flip) outcome ^= std::uint64_t{1} << j;
        }
        return outcome;
    }

    int n_qubits_;
    std::vector<int> measured_;
    NoiseModel noise_;
    std::vector<GateOp> gates_;
    std::vector<Slot> slots_1q_, slots_2q_, slots_idle_, all_slots_;
    std::size_t offset_2q_ = 0, offset_idle_ = 0;
    std::vector<StateVector> prefix_;
    std::vector<double> ideal_cdf_;
    std::vector<double> scratch_cdf_;
    std::unordered_map<std::uint64_t, std::vector<double>> single_event_cache_;
};

}  // namespace

std::vector<std::uint64_t> noisy_histogram(int n_qubits, std::span<const GateOp> gates,
                                           std::span<const int> measured, std::uint64_t shots,
                                           const NoiseModel& noise, std::uint64_t seed) {
    if (shots == 0) fail(ErrorKind::Validation, "shots must be >= 1");
    noise.validate();
    sim::check_measured(measured, n_qubits);
    StateVector probe(n_qubits);  // range-checks n_qubits
    for (const GateOp& g : gates) {
        const int hi = std::max(g.target, g.control);
        if (g.target < 0 || hi >= n_qubits || (g.kind == GateKind::CNOT && g.control < 0)) {
            fail(ErrorKind::Index, "gate " + sim::to_string(g) + " outside the register");
        }
    }
    TrajectorySampler sampler(n_qubits, gates, measured, effective_noise(noise));
    return sampler.run(shots, seed);
}

sim::CountsDistribution noisy_sample(int n_qubits, std::span<const GateOp> gates, std::span<const int> measured,
                                     std::uint64_t shots, const NoiseModel& noise, std::uint64_t seed) {
    const auto hist = noisy_histogram(n_qubits, gates, measured, shots, noise, seed);
    std::vector<double> weights(hist.begin(), hist.end());
    return sim::make_distribution(weights, static_cast<int>(measured.size()), shots);
}

std::vector<Confusion> calibrate_readout(const NoiseModel& noise, std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1000) fail(ErrorKind::Validation, "readout calibration needs at least 1000 shots");
    const int n = static_cast<int>(noise.readout_confusion.size());
    if (n < 1) fail(ErrorKind::Validation, "noise model has no readout matrices to calibrate");
    std::vector<int> measured(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) measured[static_cast<std::size_t>(q)] = q;

    std::vector<GateOp> flip_all;
    for (int q = 0; q < n; ++q) flip_all.push_back(GateOp::fixed(GateKind::X, q));

    const auto zeros = noisy_histogram(n, {}, measured, shots, noise, derive_seed(seed, "cal0", 0));
    const auto ones = noisy_histogram(n, flip_all, measured, shots, noise, derive_seed(seed, "cal1", 0));

    std::vector<Confusion> out(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
        std::uint64_t read1_given0 = 0, read0_given1 = 0;
        for (std::size_t k = 0; k < zeros.size(); ++k) {
            if ((k >> q) & 1U) read1_given0 += zeros[k];
            else read0_given1 += ones[k];
        }
        const double p01 = static_cast<double>(read1_given0) / static_cast<double>(shots);
        const double p10 = static_cast<double>(read0_given1) / static_cast<double>(shots);
        out[static_cast<std::size_t>(q)] = circuit::flip_confusion(p01, p10);
    }
    return out;
}

}  // namespace vqc::noise
