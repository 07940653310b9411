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

#include "core/train/trainer.hpp"

#include <cmath>
#include <numbers>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/search/search.hpp"
#include "gtest/gtest.h"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace vqc;
using namespace vqc::train;
using circuit::CircuitTemplate;
using sim::GateKind;

namespace {

const double kPi = std::numbers::pi;

CircuitTemplate single_ry() {
    CircuitTemplate t;
    t.n_qubits = 1;
    t.layout = {0};
    t.variational_slots = {{0, GateKind::RY}};
    t.measured_qubits = {0};
    return t;
}

MeasurementPlan binary_plan(const CircuitTemplate& t) { return MeasurementPlan::for_classes(2, t.measured_qubits); }

double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
    double diff = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff += (a[i] - b[i]) * (a[i] - b[i]);
        ref += b[i] * b[i];
    }
    return std::sqrt(diff) / std::max(std::sqrt(ref), 1e-12);
}

data::PreparedDataset two_blob(int per_class, std::uint64_t seed) {
    return data::prepare(data::synth_dataset(data::SynthKind::TwoBlob, per_class, 28, seed), 7);
}

}  // namespace

TEST(trainer, forward_examples) {
    Rng rng(1);
    auto t = testing_support::random_template(4, 16, 20, 5, rng);
    t.measured_qubits = {0, 1, 2, 3};
    const auto plan = MeasurementPlan::for_classes(4, t.measured_qubits);
    EXPECT_EQ(plan.measured_qubits, (std::vector<int>{2, 3}));
    // With no entangler-induced change on |0...0>, every expectation is +1.
    const auto e = forward(t, std::vector<double>(20, 0.0), std::vector<double>(16, 0.0), plan);
    for (double v : e) EXPECT_NEAR(v, 1.0, 1e-12);

    const auto ry = single_ry();
    for (double theta : {0.0, 0.4, kPi / 2.0, 2.5}) {
        const auto f = forward(ry, std::vector<double>{theta}, std::vector<double>{}, binary_plan(ry));
        EXPECT_NEAR(f[0], std::cos(theta), 1e-14);
    }
    EXPECT_EQ(forward(ry, std::vector<double>{0.4}, std::vector<double>{}, binary_plan(ry)),
              forward(ry, std::vector<double>{0.4}, std::vector<double>{}, binary_plan(ry)));
}

TEST(trainer, loss_examples) {
    const auto binary = MeasurementPlan::for_classes(2, std::vector<int>{0});
    EXPECT_EQ(loss(std::vector<double>{1.0}, 0, binary, LossKind::MSE), 0.0);
    EXPECT_EQ(loss(std::vector<double>{-1.0}, 0, binary, LossKind::MSE), 4.0);
    const auto three = MeasurementPlan::for_classes(3, std::vector<int>{0, 1, 2});
    EXPECT_NEAR(loss(std::vector<double>{0.2, 0.2, 0.2}, 1, three, LossKind::CrossEntropy), std::log(3.0), 1e-14);
    const auto four = MeasurementPlan::for_classes(4, std::vector<int>{0, 1});
    for (int c = 0; c < 4; ++c) EXPECT_EQ(loss(four.target(c), c, four, LossKind::MSE), 0.0);
    EXPECT_EQ(four.target(2), (std::vector<double>{-1.0, 1.0}));
    EXPECT_THROW(loss(std::vector<double>{0.0}, 2, binary, LossKind::MSE), Error);
}

TEST(trainer, loss_non_negative_and_gradient_matches_difference) {
    Rng rng(2);
    const auto three = MeasurementPlan::for_classes(3, std::vector<int>{0, 1, 2});
    const auto four = MeasurementPlan::for_classes(4, std::vector<int>{0, 1});
    for (int trial = 0; trial < 100; ++trial) {
        for (const auto* plan : {&three, &four}) {
            std::vector<double> e(plan->n_measured());
            for (double& v : e) v = 2.0 * rng.uniform() - 1.0;
            const int label = static_cast<int>(rng.below(static_cast<std::uint64_t>(plan->n_classes)));
            for (auto kind : {LossKind::MSE, LossKind::CrossEntropy}) {
                EXPECT_GE(loss(e, label, *plan, kind), 0.0);
                if (kind == LossKind::CrossEntropy && plan->kind != TaskKind::MultiClass) {
                    EXPECT_THROW(loss_gradient(e, label, *plan, kind), Error);
                    continue;
                }
                const auto g = loss_gradient(e, label, *plan, kind);
                for (std::size_t q = 0; q < e.size(); ++q) {
                    const double fd = oracle::central_difference(
                        [&](const std::vector<double>& x) { return loss(x, label, *plan, kind); }, e, q, 1e-5);
                    EXPECT_NEAR(g[q], fd, 1e-8);
                }
            }
        }
    }
}

TEST(trainer, softmax_shift_invariance) {
    Rng rng(3);
    const auto plan = MeasurementPlan::for_classes(5, std::vector<int>{0, 1, 2, 3, 4});
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> e(5);
        for (double& v : e) v = 2.0 * rng.uniform() - 1.0;
        auto shifted = e;
        const double c = 10.0 * rng.uniform() - 5.0;
        for (double& v : shifted) v += c;
        const int label = static_cast<int>(rng.below(5));
        EXPECT_NEAR(loss(e, label, plan, LossKind::CrossEntropy), loss(shifted, label, plan, LossKind::CrossEntropy), 1e-12);
        EXPECT_EQ(predict_class(e, plan), predict_class(shifted, plan));
        auto cubed = e;
        for (double& v : cubed) v = v * v * v + 3.0 * v;
        EXPECT_EQ(predict_class(e, plan), predict_class(cubed, plan));
    }
}

TEST(trainer, predict_class_examples) {
    const auto binary = MeasurementPlan::for_classes(2, std::vector<int>{0});
    EXPECT_EQ(binary.target(predict_class(std::vector<double>{0.3}, binary))[0], 1.0);
    EXPECT_EQ(predict_class(std::vector<double>{-0.3}, binary), 1);
    EXPECT_EQ(predict_class(std::vector<double>{0.0}, binary), kNoClass);
    const auto three = MeasurementPlan::for_classes(3, std::vector<int>{0, 1, 2});
    EXPECT_EQ(predict_class(std::vector<double>{0.1, 0.7, -0.2}, three), 1);
    EXPECT_EQ(predict_class(std::vector<double>{0.5, 0.5, -0.2}, three), 0);
    const auto four = MeasurementPlan::for_classes(4, std::vector<int>{0, 1});
    EXPECT_EQ(four.target(predict_class(std::vector<double>{0.9, -0.8}, four)), (std::vector<double>{1.0, -1.0}));
    EXPECT_EQ(predict_class(std::vector<double>{0.0, 0.0}, four), 0);
}

TEST(trainer, gradient_examples) {
    const auto t = single_ry();
    const auto plan = binary_plan(t);
    const std::vector<double> w{1.0};
    for (auto [theta, expected] : {std::pair{0.0, 0.0}, std::pair{kPi / 2.0, -1.0}}) {
        const std::vector<double> p{theta};
        const auto adj = weighted_expectation_gradient_adjoint(t, p, std::vector<double>{}, plan, w);
        const auto jac = expectation_jacobian_shift(t, p, std::vector<double>{}, plan);
        EXPECT_NEAR(adj[0], expected, 1e-14);
        EXPECT_NEAR(jac[0][0], expected, 1e-14);
    }
}

TEST(trainer, shift_adjoint_and_finite_difference_agree) {
    Rng rng(4);
    for (int trial = 0; trial < 25; ++trial) {
        auto t = testing_support::random_template(4, 8, 12, 4, rng);
        const auto plan = MeasurementPlan::for_classes(4, t.measured_qubits);
        const auto feats = testing_support::random_angles(8, rng, kPi);
        const auto params = testing_support::random_angles(12, rng);
        std::vector<double> w{rng.uniform() - 0.5, rng.uniform() - 0.5};
        const auto adj = weighted_expectation_gradient_adjoint(t, params, feats, plan, w);
        const auto jac = expectation_jacobian_shift(t, params, feats, plan);
        std::vector<double> shift(12, 0.0), fd(12, 0.0);
        for (std::size_t k = 0; k < 12; ++k) {
            for (std::size_t q = 0; q < 2; ++q) shift[k] += w[q] * jac[q][k];
            fd[k] = oracle::central_difference(
                [&](const std::vector<double>& x) {
                    const auto e = forward(t, x, feats, plan);
                    return w[0] * e[0] + w[1] * e[1];
                },
                params, k, 1e-4);
            EXPECT_NEAR(adj[k], shift[k], 1e-8);
        }
        EXPECT_LT(relative_error(shift, fd), 1e-5);
    }
}

TEST(trainer, batch_gradient_modes_agree) {
    Rng rng(5);
    const auto ds = two_blob(4, 1);
    auto t = testing_support::random_template(4, 49, 10, 4, rng);
    const auto plan = MeasurementPlan::for_classes(2, t.measured_qubits);
    const auto params = testing_support::random_angles(10, rng);
    std::vector<BatchItem> batch;
    for (std::size_t i = 0; i < ds.size(); ++i) batch.push_back({&ds.features[i], ds.labels[i]});
    for (auto kind : {LossKind::MSE}) {
        const auto a = gradient(t, params, batch, plan, kind, GradientMode::Adjoint);
        const auto s = gradient(t, params, batch, plan, kind, GradientMode::ParameterShift);
        EXPECT_NEAR(a.mean_loss, s.mean_loss, 1e-12);
        for (std::size_t k = 0; k < 10; ++k) EXPECT_NEAR(a.gradient[k], s.gradient[k], 1e-8);
    }
}

TEST(trainer, cross_entropy_restricted_to_one_qubit_per_class) {
    TrainConfig config;
    config.loss_kind = LossKind::CrossEntropy;
    const auto ds = two_blob(4, 1);
    const auto t = single_ry();
    auto embed = t;
    for (int i = 0; i < 49; ++i) embed.embedding_slots.push_back({0, GateKind::RY});
    EXPECT_THROW(train::train(embed, ds, binary_plan(embed), config), Error);
    EXPECT_EQ(default_loss(binary_plan(t)), LossKind::MSE);
    EXPECT_EQ(default_loss(MeasurementPlan::for_classes(3, std::vector<int>{0, 1, 2})), LossKind::CrossEntropy);
}

TEST(trainer, adam_zero_gradient) {
    Adam adam(3);
    std::vector<double> p{0.1, -0.2, 0.3};
    const auto before = p;
    for (int i = 0; i < 5; ++i) adam.step(p, std::vector<double>(3, 0.0), AdamSettings{});
    EXPECT_EQ(p, before);
}

class TrainerFixture : public ::testing::Test {
  protected:
    static void SetUpTestSuite() {
        dataset_ = new data::PreparedDataset(two_blob(100, 3));
        const auto device = circuit::bundled_device();
        search::SearchConfig sc;
        sc.n_candidates = 1;
        sc.seed = 5;
        auto cands = search::generate_candidates(sc, device, 4, 49, 60);
        tmpl_ = new CircuitTemplate(cands.front());
        tmpl_->measured_qubits = MeasurementPlan::for_classes(2, tmpl_->measured_qubits).measured_qubits;
    }
    static void TearDownTestSuite() {
        delete dataset_;
        delete tmpl_;
    }
    static TrainConfig config() {
        TrainConfig c;
        c.epochs = 50;
        c.learning_rate = 0.05;
        c.batch_size = 32;
        c.seed = 9;
        return c;
    }
    static inline data::PreparedDataset* dataset_ = nullptr;
    static inline CircuitTemplate* tmpl_ = nullptr;
};

TEST_F(TrainerFixture, two_blob_reaches_high_train_accuracy) {
    const auto plan = MeasurementPlan::for_classes(2, tmpl_->measured_qubits);
    const auto r = train::train(*tmpl_, *dataset_, plan, config());
    ASSERT_EQ(r.state.history.size(), 50u);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < dataset_->size(); ++i) {
        const auto e = forward(*tmpl_, r.state.params, dataset_->features[i].values(), plan);
        correct += predict_class(e, plan) == dataset_->labels[i];
    }
    EXPECT_GE(static_cast<double>(correct) / static_cast<double>(dataset_->size()), 0.95);
    EXPECT_EQ(r.best.values.size(), 60u);
    ASSERT_GE(r.state.best_epoch, 0);
    const auto& best = r.state.history[static_cast<std::size_t>(r.state.best_epoch)];
    for (const auto& h : r.state.history) {
        EXPECT_GE(best.val_auc, h.val_auc);
        if (h.val_auc == best.val_auc) EXPECT_GE(best.val_acc, h.val_acc);
    }
}

TEST_F(TrainerFixture, deterministic_history) {
    const auto plan = MeasurementPlan::for_classes(2, tmpl_->measured_qubits);
    auto c = config();
    c.epochs = 5;
    const auto a = train::train(*tmpl_, *dataset_, plan, c);
    const auto b = train::train(*tmpl_, *dataset_, plan, c);
    EXPECT_EQ(write_state(a.state), write_state(b.state));
    ASSERT_EQ(a.state.history.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(a.state.history[i].train_loss, b.state.history[i].train_loss);
}

TEST_F(TrainerFixture, zero_learning_rate_freezes_parameters) {
    const auto plan = MeasurementPlan::for_classes(2, tmpl_->measured_qubits);
    auto c = config();
    c.epochs = 4;
    c.learning_rate = 0.0;
    const auto r = train::train(*tmpl_, *dataset_, plan, c);
    EXPECT_EQ(r.state.params, initial_parameters(60, c.seed));
    for (const auto& h : r.state.history) EXPECT_NEAR(h.train_loss, r.state.history.front().train_loss, 1e-12);
}

TEST_F(TrainerFixture, resume_matches_uninterrupted_run) {
    const auto plan = MeasurementPlan::for_classes(2, tmpl_->measured_qubits);
    auto c = config();
    c.epochs = 6;
    const auto full = train::train(*tmpl_, *dataset_, plan, c);
    const auto half = train::train(*tmpl_, *dataset_, plan, c, std::nullopt, {}, 3);
    EXPECT_EQ(half.state.next_epoch, 3);
    const auto restored = parse_state(write_state(half.state));
    EXPECT_EQ(write_state(restored), write_state(half.state));
    const auto resumed = train::train(*tmpl_, *dataset_, plan, c, restored);
    EXPECT_EQ(write_state(resumed.state), write_state(full.state));
}

TEST(trainer, state_parse_errors) {
    EXPECT_THROW(parse_state("VQC_TRAIN_STATE v1\nnext_epoch 1\n"), Error);
    EXPECT_THROW(parse_state("bogus\n"), Error);
}

TEST_F(TrainerFixture, divergence_reports_epoch) {
    const auto plan = MeasurementPlan::for_classes(2, tmpl_->measured_qubits);
    auto c = config();
    c.epochs = 3;
    c.learning_rate = 1e308;
    try {
        train::train(*tmpl_, *dataset_, plan, c);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Numerical);
        EXPECT_NE(std::string(e.what()).find("epoch 0"), std::string::npos) << e.what();
    }
}
