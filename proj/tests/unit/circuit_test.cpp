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

#include "core/circuit/circuit.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "core/circuit/device.hpp"
#include "core/error.hpp"
#include "gtest/gtest.h"
#include "test_support.hpp"

using namespace vqc;
using namespace vqc::circuit;

namespace {

const double kPi = std::numbers::pi;

DeviceDescription chain3() {
    DeviceDescription d;
    d.n_qubits = 3;
    d.coupling_edges = {{0, 1}, {1, 2}};
    d.readout_confusion.assign(3, identity_confusion());
    return d;
}

CircuitTemplate paper_sized_template(Rng& rng) {
    auto t = testing_support::random_template(4, 49, 120, 8, rng);
    t.id = 17;
    t.layout = {0, 1, 2, 3};
    t.measured_qubits = {3};
    return t;
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorKind::Config;
}

}  // namespace

TEST(circuit, bind_single_slot) {
    CircuitTemplate t;
    t.n_qubits = 1;
    t.embedding_slots = {{0, GateKind::RY}};
    t.measured_qubits = {0};
    const auto stream = circuit::bind(t, std::vector<double>{kPi}, std::vector<double>{});
    ASSERT_EQ(stream.size(), 1u);
    EXPECT_EQ(stream[0], GateOp::rotation(GateKind::RY, 0, kPi));
}

TEST(circuit, bind_counts_and_order) {
    Rng rng(1);
    auto t = testing_support::random_template(4, 49, 60, 6, rng);
    const auto f = testing_support::random_angles(49, rng, kPi);
    const auto p = testing_support::random_angles(60, rng);
    const auto stream = circuit::bind(t, f, p);
    EXPECT_EQ(stream.size(), 49u + 60u + t.entanglers.size());
    std::size_t embeds = 0;
    for (std::size_t i = 0; i < 49; ++i) {
        EXPECT_TRUE(sim::is_rotation(stream[i].kind));
        EXPECT_EQ(stream[i].angle, f[i]);
        ++embeds;
    }
    EXPECT_EQ(embeds, 49u);
    // Variational gates appear in slot order at the recorded stream indices.
    const auto idx = variational_stream_indices(t);
    ASSERT_EQ(idx.size(), 60u);
    for (std::size_t k = 0; k < 60; ++k) EXPECT_EQ(stream[idx[k]].angle, p[k]);
    // Entangler at position k sits immediately before variational slot k.
    for (const auto& e : t.entanglers) {
        if (static_cast<std::size_t>(e.position) < 60) {
            const std::size_t at = idx[static_cast<std::size_t>(e.position)];
            bool found = false;
            for (std::size_t j = 49; j < at; ++j) found = found || (stream[j] == GateOp::cnot(e.control, e.target));
            EXPECT_TRUE(found);
        }
    }
}

TEST(circuit, bind_length_mismatch) {
    Rng rng(2);
    auto t = testing_support::random_template(2, 4, 3, 1, rng);
    EXPECT_EQ(kind_of([&] { circuit::bind(t, std::vector<double>(3, 0.0), std::vector<double>(3, 0.0)); }), ErrorKind::Validation);
    EXPECT_EQ(kind_of([&] { circuit::bind(t, std::vector<double>(4, 0.0), std::vector<double>(2, 0.0)); }), ErrorKind::Validation);
}

TEST(circuit, zero_params_equal_embedding_only_distribution) {
    Rng rng(3);
    auto t = testing_support::random_template(3, 9, 12, 0, rng);
    const auto f = testing_support::random_angles(9, rng, kPi);
    const auto full = sim::run_circuit(3, circuit::bind(t, f, std::vector<double>(12, 0.0)));
    CircuitTemplate embed_only = t;
    embed_only.variational_slots.clear();
    const auto ref = sim::run_circuit(3, circuit::bind(embed_only, f, std::vector<double>{}));
    const std::vector<int> m{0, 1, 2};
    const auto a = sim::exact_probabilities(full, m), b = sim::exact_probabilities(ref, m);
    for (const auto& [k, v] : b.entries) EXPECT_NEAR(a.entries.at(k), v, 1e-12);
}

TEST(circuit, feature_vector_range) {
    EXPECT_NO_THROW(FeatureVector::make({0.0, kPi, 1.0}));
    EXPECT_EQ(kind_of([] { FeatureVector::make({-1e-9}); }), ErrorKind::Validation);
    EXPECT_EQ(kind_of([] { FeatureVector::make({kPi + 1e-9}); }), ErrorKind::Validation);
    EXPECT_EQ(kind_of([] { FeatureVector::make({std::nan("")}); }), ErrorKind::Validation);
}

TEST(circuit, clifford_replica_properties) {
    Rng rng(4);
    auto t = testing_support::random_template(4, 40, 60, 6, rng);
    t.id = 3;
    EXPECT_EQ(clifford_replica(t, 9), clifford_replica(t, 9));
    EXPECT_NE(clifford_replica(t, 9), clifford_replica(t, 10));
    const auto plain = circuit::bind(t, std::vector<double>(40, 0.0), std::vector<double>(60, 0.0));
    const auto rep = clifford_replica(t, 9);
    ASSERT_EQ(rep.size(), plain.size());
    for (std::size_t i = 0; i < rep.size(); ++i) {
        EXPECT_EQ(rep[i].kind, plain[i].kind);
        EXPECT_EQ(rep[i].target, plain[i].target);
        if (sim::is_rotation(rep[i].kind)) {
            const double q = rep[i].angle / (kPi / 2.0);
            EXPECT_NEAR(q, std::round(q), 1e-12);
            EXPECT_GE(std::round(q), 0.0);
            EXPECT_LE(std::round(q), 3.0);
        }
    }
}

TEST(circuit, clifford_angle_frequencies) {
    Rng rng(5);
    auto t = testing_support::random_template(4, 40, 60, 0, rng);
    std::map<long, int> freq;
    int total = 0;
    for (std::uint64_t r = 0; r < 32; ++r) {
        for (const auto& g : clifford_replica(t, derive_seed(77, r))) {
            ++freq[std::lround(g.angle / (kPi / 2.0))];
            ++total;
        }
    }
    for (long a = 0; a < 4; ++a) EXPECT_NEAR(static_cast<double>(freq[a]) / total, 0.25, 0.05);
}

TEST(circuit, clifford_replicas_are_stabilizer_states) {
    Rng rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        auto t = testing_support::random_template(4, 12, 20, 6, rng);
        const auto s = sim::run_circuit(4, clifford_replica(t, trial));
        const std::vector<int> m{0, 1, 2, 3};
        for (const auto& [k, p] : sim::exact_probabilities(s, m).entries) {
            const double scaled = p * 16.0;
            EXPECT_NEAR(scaled, std::round(scaled), 1e-9);
        }
    }
}

TEST(circuit, validate_against_device_examples) {
    CircuitTemplate t;
    t.n_qubits = 3;
    t.variational_slots = {{0, GateKind::RY}};
    t.measured_qubits = {0};
    t.entanglers = {{0, 0, 2}};
    auto r = validate_against_device(t, chain3());
    ASSERT_FALSE(r.ok());
    ASSERT_EQ(r.violations.size(), 1u);
    ASSERT_TRUE(r.violations[0].entangler.has_value());
    EXPECT_EQ(*r.violations[0].entangler, (Entangler{0, 0, 2}));

    t.entanglers = {{0, 1, 0}};
    EXPECT_TRUE(validate_against_device(t, chain3()).ok());
    t.entanglers.clear();
    EXPECT_TRUE(validate_against_device(t, chain3()).ok());

    t.layout = {0, 1, 5};
    EXPECT_FALSE(validate_against_device(t, chain3()).ok());
}

TEST(circuit, layout_maps_entanglers) {
    CircuitTemplate t;
    t.n_qubits = 2;
    t.layout = {2, 1};
    t.variational_slots = {{0, GateKind::RY}};
    t.measured_qubits = {0};
    t.entanglers = {{0, 0, 1}};
    EXPECT_TRUE(validate_against_device(t, chain3()).ok());
    t.layout = {0, 2};
    EXPECT_FALSE(validate_against_device(t, chain3()).ok());
}

TEST(circuit, round_trip) {
    Rng rng(7);
    CircuitDocument doc{paper_sized_template(rng), ParameterVector{testing_support::random_angles(120, rng)},
                        {"seed 5", "tool vqc test"}};
    const auto text = serialize(doc);
    EXPECT_EQ(text.rfind("QCIRCUIT v1\n", 0), 0u);
    const auto back = deserialize(text);
    EXPECT_EQ(back, doc);
    CircuitDocument no_params{doc.tmpl, std::nullopt, {}};
    EXPECT_EQ(deserialize(serialize(no_params)), no_params);
}

TEST(circuit, truncated_document_names_section) {
    Rng rng(8);
    const auto text = serialize({paper_sized_template(rng), std::nullopt, {}});
    const auto cut = text.substr(0, text.find("ENTANGLE"));
    try {
        deserialize(cut);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parse);
        EXPECT_NE(std::string(e.what()).find("ENTANGLE"), std::string::npos) << e.what();
    }
}

TEST(circuit, nan_parameter_rejected) {
    CircuitTemplate t;
    t.n_qubits = 1;
    t.variational_slots = {{0, GateKind::RX}};
    t.measured_qubits = {0};
    auto text = serialize({t, ParameterVector{{0.5}}, {}});
    const auto pos = text.find("0.5");
    text.replace(pos, 3, "NaN");
    try {
        deserialize(text);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parse);
    }
}

TEST(circuit, depth) {
    CircuitTemplate t;
    t.n_qubits = 2;
    t.embedding_slots = {{0, GateKind::RY}, {1, GateKind::RY}};
    t.variational_slots = {{0, GateKind::RX}};
    t.entanglers = {{0, 0, 1}};
    t.measured_qubits = {1};
    EXPECT_EQ(circuit_depth(t), 3u);
}

TEST(device, bundled_is_valid_and_connected) {
    const auto d = bundled_device();
    EXPECT_EQ(d.n_qubits, 16);
    EXPECT_NO_THROW(d.validate());
    for (const auto& e : d.coupling_edges) EXPECT_NE(e.a, e.b);
    for (int q = 0; q < d.n_qubits; ++q) {
        EXPECT_GE(d.readout_error(q), 0.01 - 1e-12);
        EXPECT_LE(d.readout_error(q), 0.03 + 1e-12);
    }
    EXPECT_DOUBLE_EQ(d.p_dep_1q, 0.001);
    EXPECT_DOUBLE_EQ(d.p_dep_2q, 0.01);
    EXPECT_DOUBLE_EQ(d.p_idle, 0.002);
    EXPECT_DOUBLE_EQ(d.epsilon_coherent, 0.02);
    // Breadth-first reachability from qubit 0.
    const auto adj = d.adjacency();
    std::vector<bool> seen(16, false);
    std::vector<int> queue{0};
    seen[0] = true;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        for (int n : adj[static_cast<std::size_t>(queue[i])]) {
            if (!seen[static_cast<std::size_t>(n)]) {
                seen[static_cast<std::size_t>(n)] = true;
                queue.push_back(n);
            }
        }
    }
    EXPECT_EQ(queue.size(), 16u);
}

TEST(device, file_round_trip_and_errors) {
    const auto d = bundled_device();
    EXPECT_EQ(parse_device(write_device(d)), d);
    const std::string text = write_device(d);
    try {
        parse_device(text.substr(0, text.find("GATE_ERRORS")));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parse);
        EXPECT_NE(std::string(e.what()).find("GATE_ERRORS"), std::string::npos) << e.what();
    }
    auto bad = d;
    bad.coupling_edges.push_back({3, 3});
    EXPECT_THROW(bad.validate(), Error);
    bad = d;
    bad.readout_confusion[0] = {{{0.9, 0.1}, {0.2, 0.9}}};
    EXPECT_THROW(bad.validate(), Error);
}
