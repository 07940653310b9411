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

#include "core/mitigation/m3.hpp"

#include <cmath>
#include <filesystem>

#include "core/error.hpp"
#include "core/io.hpp"
#include "core/rng.hpp"
#include "gtest/gtest.h"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace vqc;
using namespace vqc::mitigation;
using sim::CountsDistribution;

namespace {

ReadoutCalibration random_calibration(int n, double max_flip, Rng& rng) {
    ReadoutCalibration cal;
    for (int q = 0; q < n; ++q) cal.qubits.push_back(circuit::flip_confusion(max_flip * rng.uniform(), max_flip * rng.uniform()));
    return cal;
}

std::vector<oracle::Confusion2> as_oracle(const ReadoutCalibration& cal) {
    std::vector<oracle::Confusion2> out;
    for (const auto& c : cal.qubits) out.push_back({{c[0][0], c[0][1]}, {c[1][0], c[1][1]}});
    return out;
}

/// Draws `shots` outcomes from `probs` over n bits.
CountsDistribution sample(const std::vector<double>& probs, int n, std::uint64_t shots, Rng& rng) {
    const auto cdf = sim::cumulative(probs);
    std::vector<double> hist(probs.size(), 0.0);
    for (std::uint64_t s = 0; s < shots; ++s) hist[sim::draw_from_cdf(cdf, rng.uniform())] += 1.0;
    return sim::make_distribution(hist, n, shots);
}

std::vector<double> random_probs(std::size_t d, Rng& rng) {
    std::vector<double> p(d);
    double t = 0.0;
    for (double& v : p) t += v = rng.uniform() * rng.uniform();
    for (double& v : p) v /= t;
    return p;
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

TEST(mitigation, identity_is_fixed_point) {
    Rng rng(1);
    for (int n = 1; n <= 4; ++n) {
        ReadoutCalibration cal;
        cal.qubits.assign(static_cast<std::size_t>(n), circuit::identity_confusion());
        const auto raw = sample(random_probs(std::size_t{1} << n, rng), n, 500, rng);
        const auto q = mitigate(raw, cal);
        EXPECT_EQ(q.iterations, 1u);
        const auto norm = raw.normalized();
        ASSERT_EQ(q.entries.size(), norm.entries.size());
        for (const auto& [k, v] : norm.entries) EXPECT_EQ(q.entries.at(k), v);
    }
}

TEST(mitigation, single_qubit_example) {
    ReadoutCalibration cal{{{{{0.9, 0.2}, {0.1, 0.8}}}}};
    CountsDistribution raw;
    raw.n_measured = 1;
    raw.entries = {{"0", 0.69}, {"1", 0.31}};
    const auto q = mitigate(raw, cal);
    EXPECT_NEAR(q.entries.at("0"), 0.7, 1e-6);
    EXPECT_NEAR(q.entries.at("1"), 0.3, 1e-6);
    const auto dense = oracle::solve({{0.9, 0.2}, {0.1, 0.8}}, {0.69, 0.31});
    EXPECT_NEAR(dense[0], 0.7, 1e-12);
}

TEST(mitigation, matches_dense_oracle) {
    Rng rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(4));
        const auto cal = random_calibration(n, 0.1, rng);
        const auto truth = random_probs(std::size_t{1} << n, rng);
        const auto noisy = oracle::kron_confusion(as_oracle(cal));
        std::vector<double> p(truth.size(), 0.0);
        for (std::size_t r = 0; r < p.size(); ++r)
            for (std::size_t c = 0; c < p.size(); ++c) p[r] += noisy[r][c] * truth[c];
        // Half the instances see the full outcome space, half a sampled subset.
        const auto raw = trial % 2 ? sample(p, n, 40, rng) : sim::make_distribution(p, n, 0);
        const auto q = mitigate(raw, cal);
        std::vector<std::size_t> observed;
        std::vector<double> praw;
        const auto norm = raw.normalized();
        for (const auto& [k, v] : norm.entries) {
            observed.push_back(sim::outcome_index(k));
            praw.push_back(v);
        }
        const auto x = oracle::dense_mitigation(as_oracle(cal), observed, praw);
        double l1 = 0.0, sum_x = 0.0, sum_p = 0.0;
        for (std::size_t i = 0; i < observed.size(); ++i) {
            l1 += std::abs(q.entries.at(sim::outcome_key(observed[i], n)) - x[i]);
            sum_p += praw[i];
        }
        for (const auto& [k, v] : q.entries) sum_x += v;
        EXPECT_LT(l1, 1e-6) << "trial " << trial;
        EXPECT_NEAR(sum_x, sum_p, 1e-6);
        EXPECT_LT(q.residual, 1e-6);
    }
}

TEST(mitigation, efficacy_against_ideal) {
    Rng rng(3);
    int improved = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const auto cal = random_calibration(4, 0.05, rng);
        const auto truth = random_probs(16, rng);
        const auto noisy = oracle::kron_confusion(as_oracle(cal));
        std::vector<double> p(16, 0.0);
        for (std::size_t r = 0; r < 16; ++r)
            for (std::size_t c = 0; c < 16; ++c) p[r] += noisy[r][c] * truth[c];
        const auto raw = sample(p, 4, 32000, rng);
        const auto q = mitigate(raw, cal);
        std::map<std::string, double> ideal;
        for (std::uint64_t k = 0; k < 16; ++k) ideal[sim::outcome_key(k, 4)] = truth[k];
        improved += oracle::tvd(q.entries, ideal) < oracle::tvd(raw.normalized().entries, ideal);
    }
    EXPECT_GE(improved, 190);
}

TEST(mitigation, negative_weights_preserved) {
    ReadoutCalibration cal{{circuit::flip_confusion(0.1, 0.1)}};
    CountsDistribution raw;
    raw.n_measured = 1;
    raw.entries = {{"0", 0.95}, {"1", 0.05}};
    const auto q = mitigate(raw, cal);
    EXPECT_LT(q.entries.at("1"), 0.0);
    EXPECT_GT(expectations_from_quasi(q, 1)[0], 1.0);
}

TEST(mitigation, errors) {
    CountsDistribution raw;
    raw.n_measured = 2;
    raw.entries = {{"00", 0.5}, {"11", 0.5}};
    ReadoutCalibration one{{circuit::identity_confusion()}};
    EXPECT_EQ(kind_of([&] { mitigate(raw, one); }), ErrorKind::Calibration);
    ReadoutCalibration swap{{circuit::flip_confusion(1.0, 1.0), circuit::identity_confusion()}};
    EXPECT_EQ(kind_of([&] { mitigate(raw, swap); }), ErrorKind::Calibration);
    ReadoutCalibration hard{{circuit::flip_confusion(0.45, 0.45), circuit::flip_confusion(0.45, 0.45)}};
    raw.entries = {{"00", 0.4}, {"01", 0.1}, {"10", 0.3}, {"11", 0.2}};
    try {
        mitigate(raw, hard, 1e-12, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Convergence);
        EXPECT_NE(std::string(e.what()).find("residual"), std::string::npos);
    }
    raw.entries.clear();
    EXPECT_EQ(kind_of([&] { mitigate(raw, hard); }), ErrorKind::Validation);
}

TEST(mitigation, expectation_examples) {
    CountsDistribution c;
    c.n_measured = 1;
    c.entries = {{"0", 16000}, {"1", 16000}};
    c.total_shots = 32000;
    EXPECT_EQ(expectations_from_counts(c, 1)[0], 0.0);
    QuasiDistribution q;
    q.n_measured = 2;
    q.entries = {{"00", 1.0}};
    EXPECT_EQ(expectations_from_quasi(q, 2), (std::vector<double>{1.0, 1.0}));
    q.n_measured = 1;
    q.entries = {{"0", 1.05}, {"1", -0.05}};
    EXPECT_NEAR(expectations_from_quasi(q, 1)[0], 1.1, 1e-15);
    q.entries = {{"0", 0.5}, {"1", -0.5}};
    EXPECT_EQ(kind_of([&] { expectations_from_quasi(q, 1); }), ErrorKind::Validation);
    // Bit j of a key is the rightmost-but-j character.
    q.n_measured = 2;
    q.entries = {{"01", 1.0}};
    EXPECT_EQ(expectations_from_quasi(q, 2), (std::vector<double>{-1.0, 1.0}));
}

TEST(mitigation, calibration_and_counts_files) {
    ReadoutCalibration cal{{circuit::flip_confusion(0.02, 0.05), circuit::flip_confusion(0.01, 0.03)}};
    const auto back = parse_calibration(write_calibration(cal));
    ASSERT_EQ(back.size(), 2u);
    for (std::size_t q = 0; q < 2; ++q)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) EXPECT_DOUBLE_EQ(back.qubits[q][i][j], cal.qubits[q][i][j]);
    const auto path = (std::filesystem::path(testing_support::temp_dir("mit")) / "cal.txt").string();
    io::write_file(path, "# two qubits\n0.98 0.05 0.02 0.95\n");
    EXPECT_EQ(load_calibration(path).size(), 1u);
    EXPECT_EQ(kind_of([] { parse_calibration("0.9 0.2 0.2 0.8\n"); }), ErrorKind::Calibration);

    const auto counts = parse_counts("# raw\n00 10\n11 30\n");
    EXPECT_EQ(counts.n_measured, 2);
    EXPECT_EQ(counts.total_shots, 40u);
    EXPECT_EQ(parse_counts(write_counts(counts)), counts);
    EXPECT_EQ(kind_of([] { parse_counts("00 10\n00 5\n"); }), ErrorKind::Parse);
    EXPECT_EQ(kind_of([] { parse_counts("00 -1\n"); }), ErrorKind::Parse);
    EXPECT_EQ(kind_of([] { parse_counts("0a 1\n"); }), ErrorKind::Parse);
    const auto q = mitigate(counts, ReadoutCalibration{{circuit::identity_confusion(), circuit::identity_confusion()}});
    const auto text = write_quasi(q);
    EXPECT_NE(text.find("# iterations 1"), std::string::npos) << text;
}
