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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "core/error.hpp"
#include "core/io.hpp"
#include "core/metrics/metrics.hpp"
#include "core/rng.hpp"
#include "core/sim/statevector.hpp"

namespace vqc::train {

using sim::GateKind;
using sim::StateVector;

const char* to_string(LossKind kind) noexcept { return kind == LossKind::MSE ? "mse" : "cross-entropy"; }

const char* to_string(GradientMode mode) noexcept {
    return mode == GradientMode::Adjoint ? "adjoint" : "parameter-shift";
}

void TrainConfig::validate() const {
    if (epochs < 1) fail(ErrorKind::Config, "epochs must be >= 1");
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) fail(ErrorKind::Config, "learning_rate must be >= 0");
    if (batch_size < 1) fail(ErrorKind::Config, "batch_size must be >= 1");
    if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
        fail(ErrorKind::Config, "validation_fraction must lie in [0, 1)");
    }
}

LossKind default_loss(const MeasurementPlan& plan) {
    return plan.kind == TaskKind::MultiClass ? LossKind::CrossEntropy : LossKind::MSE;
}

namespace {

std::vector<double> expectations_of(const StateVector& state, const MeasurementPlan& plan) {
    std::vector<double> e;
    e.reserve(plan.n_measured());
    for (int q : plan.measured_qubits) e.push_back(sim::expectation_z(state, q));
    return e;
}

std::vector<sim::GateOp> bound_stream(const circuit::CircuitTemplate& tmpl, std::span<const double> params,
                                      std::span<const double> features) {
    return circuit::bind(tmpl, std::vector<double>(features.begin(), features.end()),
                         std::vector<double>(params.begin(), params.end()));
}

}  // namespace

std::vector<double> forward(const circuit::CircuitTemplate& tmpl, std::span<const double> params,
                            std::span<const double> features, const MeasurementPlan& plan) {
    const auto stream = bound_stream(tmpl, params, features);
    return expectations_of(sim::run_circuit(tmpl.n_qubits, stream), plan);
}

double loss(std::span<const double> e, int label, const MeasurementPlan& plan, LossKind kind) {
    if (e.size() != plan.n_measured()) fail(ErrorKind::Validation, "expectation vector length does not match plan");
    if (label < 0 || label >= plan.n_classes) {
        fail(ErrorKind::Validation, "label " + std::to_string(label) + " outside 0.." + std::to_string(plan.n_classes - 1));
    }
    if (kind == LossKind::MSE) {
        const auto t = plan.target(label);
        double total = 0.0;
        for (std::size_t q = 0; q < e.size(); ++q) total += (e[q] - t[q]) * (e[q] - t[q]);
        return total / static_cast<double>(e.size());
    }
    const auto scores = class_scores(e, plan);
    if (static_cast<int>(scores.size()) <= label) fail(ErrorKind::Validation, "cross-entropy needs one score per class");
    const double peak = *std::max_element(scores.begin(), scores.end());
    double z = 0.0;
    for (double s : scores) z += std::exp(s - peak);
    return -(scores[static_cast<std::size_t>(label)] - peak - std::log(z));
}

std::vector<double> loss_gradient(std::span<const double> e, int label, const MeasurementPlan& plan, LossKind kind) {
    (void)loss(e, label, plan, kind);  // argument checks
    std::vector<double> g(e.size(), 0.0);
    if (kind == LossKind::MSE) {
        const auto t = plan.target(label);
        for (std::size_t q = 0; q < e.size(); ++q) g[q] = 2.0 * (e[q] - t[q]) / static_cast<double>(e.size());
        return g;
    }
    if (plan.kind != TaskKind::MultiClass) {
        fail(ErrorKind::Config, "cross-entropy training is only defined on one-qubit-per-class plans");
    }
    const auto p = metrics::softmax(e);
    for (std::size_t q = 0; q < e.size(); ++q) g[q] = p[q] - (static_cast<int>(q) == label ? 1.0 : 0.0);
    return g;
}

std::vector<std::vector<double>> expectation_jacobian_shift(const circuit::CircuitTemplate& tmpl,
                                                            std::span<const double> params,
                                                            std::span<const double> features,
                                                            const MeasurementPlan& plan) {
    std::vector<std::vector<double>> jac(plan.n_measured(), std::vector<double>(params.size(), 0.0));
    std::vector<double> shifted(params.begin(), params.end());
    constexpr double shift = std::numbers::pi / 2.0;
    for (std::size_t k = 0; k < params.size(); ++k) {
        shifted[k] = params[k] + shift;
        const auto plus = forward(tmpl, shifted, features, plan);
        shifted[k] = params[k] - shift;
        const auto minus = forward(tmpl, shifted, features, plan);
        shifted[k] = params[k];
        for (std::size_t q = 0; q < plus.size(); ++q) jac[q][k] = 0.5 * (plus[q] - minus[q]);
    }
    return jac;
}

std::vector<double> weighted_expectation_gradient_adjoint(const circuit::CircuitTemplate& tmpl,
                                                          std::span<const double> params,
                                                          std::span<const double> features,
                                                          const MeasurementPlan& plan,
                                                          std::span<const double> weights) {
    const auto stream = bound_stream(tmpl, params, features);
    const auto var_index = circuit::variational_stream_indices(tmpl);
    std::vector<long> param_at(stream.size(), -1);
    for (std::size_t k = 0; k < var_index.size(); ++k) param_at[var_index[k]] = static_cast<long>(k);

    StateVector psi = sim::run_circuit(tmpl.n_qubits, stream);
    // lambda = H psi with H = sum_q w_q Z_q, diagonal in the computational basis.
    StateVector lambda = psi;
    {
        auto amps = lambda.amplitudes();
        for (std::size_t i = 0; i < amps.size(); ++i) {
            double h = 0.0;
            for (std::size_t j = 0; j < plan.measured_qubits.size(); ++j) {
                h += ((i >> plan.measured_qubits[j]) & 1U) ? -weights[j] : weights[j];
            }
            amps[i] *= h;
        }
    }
    std::vector<double> grad(params.size(), 0.0);
    StateVector generator_psi = psi;
    for (std::size_t s = stream.size(); s-- > 0;) {
        const sim::GateOp& g = stream[s];
        if (param_at[s] >= 0) {
            // dR_P(t)/dt = -i/2 P R_P(t), so d<H>/dt = Im <lambda| P |psi>.
            generator_psi = psi;
            const GateKind pauli = g.kind == GateKind::RX ? GateKind::X : g.kind == GateKind::RY ? GateKind::Y : GateKind::Z;
            generator_psi.apply_pauli(pauli, g.target);
            grad[static_cast<std::size_t>(param_at[s])] = lambda.inner(generator_psi).imag();
        }
        psi.apply_adjoint(g);
        lambda.apply_adjoint(g);
    }
    return grad;
}

GradientResult gradient(const circuit::CircuitTemplate& tmpl, std::span<const double> params,
                        std::span<const BatchItem> batch, const MeasurementPlan& plan, LossKind kind,
                        GradientMode mode) {
    if (batch.empty()) fail(ErrorKind::Validation, "gradient of an empty batch");
    GradientResult out;
    out.gradient.assign(params.size(), 0.0);
    for (const BatchItem& item : batch) {
        const auto& feats = item.features->values();
        const auto e = forward(tmpl, params, feats, plan);
        out.mean_loss += loss(e, item.label, plan, kind);
        const auto w = loss_gradient(e, item.label, plan, kind);
        if (mode == GradientMode::Adjoint) {
            const auto g = weighted_expectation_gradient_adjoint(tmpl, params, feats, plan, w);
            for (std::size_t k = 0; k < g.size(); ++k) out.gradient[k] += g[k];
        } else {
            const auto jac = expectation_jacobian_shift(tmpl, params, feats, plan);
            for (std::size_t q = 0; q < jac.size(); ++q) {
                for (std::size_t k = 0; k < params.size(); ++k) out.gradient[k] += w[q] * jac[q][k];
            }
        }
    }
    const double n = static_cast<double>(batch.size());
    for (double& g : out.gradient) g /= n;
    out.mean_loss /= n;
    return out;
}

std::vector<double> initial_parameters(std::size_t n, std::uint64_t seed) {
    Rng rng(derive_seed(seed, "init", 0));
    std::vector<double> p(n);
    for (double& v : p) v = std::numbers::pi * (2.0 * rng.uniform() - 1.0);
    return p;
}

void split_train_validation(const data::PreparedDataset& dataset, const TrainConfig& config,
                            std::vector<std::size_t>& train_idx, std::vector<std::size_t>& val_idx) {
    train_idx = dataset.indices_of(data::Split::Train);
    val_idx = dataset.indices_of(data::Split::Validation);
    if (!val_idx.empty() || config.validation_fraction == 0.0) return;
    Rng rng(derive_seed(config.seed, "holdout", 0));
    std::vector<std::size_t> shuffled = train_idx;
    shuffle(shuffled, rng);
    const auto n_val = static_cast<std::size_t>(
        std::floor(config.validation_fraction * static_cast<double>(shuffled.size())));
    val_idx.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_val));
    std::sort(val_idx.begin(), val_idx.end());
    std::vector<std::size_t> rest(shuffled.begin() + static_cast<std::ptrdiff_t>(n_val), shuffled.end());
    std::sort(rest.begin(), rest.end());
    train_idx = std::move(rest);
}

namespace {

EpochRecord validate_epoch(const circuit::CircuitTemplate& tmpl, const std::vector<double>& params,
                           const data::PreparedDataset& dataset, const std::vector<std::size_t>& idx,
                           const MeasurementPlan& plan) {
    EpochRecord r;
    metrics::Matrix expectations;
    std::vector<int> labels;
    for (std::size_t i : idx) {
        expectations.push_back(forward(tmpl, params, dataset.features[i].values(), plan));
        labels.push_back(dataset.labels[i]);
    }
    r.val_acc = metrics::accuracy(expectations, labels, plan);
    try {
        r.val_auc = metrics::evaluate(expectations, labels, plan).auc;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Validation) throw;
        r.val_auc = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

}  // namespace

TrainResult train(const circuit::CircuitTemplate& tmpl, const data::PreparedDataset& dataset,
                  const MeasurementPlan& plan, const TrainConfig& config, std::optional<TrainState> resume,
                  const EpochCallback& on_epoch, std::optional<int> stop_after_epoch) {
    config.validate();
    tmpl.validate();
    if (dataset.n_classes != plan.n_classes) fail(ErrorKind::Config, "plan and dataset disagree on n_classes");
    if (dataset.n_features() != tmpl.n_embed()) {
        fail(ErrorKind::Config, "dataset has " + std::to_string(dataset.n_features()) + " features, template embeds " +
                                    std::to_string(tmpl.n_embed()));
    }
    const LossKind kind = config.loss_kind.value_or(default_loss(plan));
    std::vector<std::size_t> train_idx, val_idx;
    split_train_validation(dataset, config, train_idx, val_idx);
    if (train_idx.empty()) fail(ErrorKind::Config, "dataset has no training samples");
    if (val_idx.empty()) val_idx = train_idx;

    TrainState state;
    if (resume) {
        state = std::move(*resume);
        if (state.params.size() != tmpl.n_params() || state.adam.m.size() != tmpl.n_params()) {
            fail(ErrorKind::Config, "resume state does not match the template's parameter count");
        }
    } else {
        state.params = initial_parameters(tmpl.n_params(), config.seed);
        state.adam = Adam(tmpl.n_params());
        state.best_params = state.params;
    }
    const AdamSettings settings = config.adam();
    std::vector<BatchItem> batch;

    for (int epoch = state.next_epoch; epoch < config.epochs; ++epoch) {
        std::vector<std::size_t> order = train_idx;
        Rng rng(derive_seed(config.seed, "epoch", static_cast<std::uint64_t>(epoch)));
        shuffle(order, rng);
        double loss_sum = 0.0;
        std::size_t batch_no = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size, ++batch_no) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            batch.clear();
            for (std::size_t i = start; i < end; ++i) batch.push_back({&dataset.features[order[i]], dataset.labels[order[i]]});
            const auto g = gradient(tmpl, state.params, batch, plan, kind, config.gradient_mode);
            const bool finite = std::isfinite(g.mean_loss) &&
                                std::all_of(g.gradient.begin(), g.gradient.end(), [](double v) { return std::isfinite(v); });
            if (!finite) {
                fail(ErrorKind::Numerical, "loss diverged (NaN) at epoch " + std::to_string(epoch) + " batch " +
                                               std::to_string(batch_no));
            }
            loss_sum += g.mean_loss * static_cast<double>(end - start);
            state.adam.step(state.params, g.gradient, settings);
            if (!std::all_of(state.params.begin(), state.params.end(), [](double v) { return std::isfinite(v); })) {
                fail(ErrorKind::Numerical, "parameters diverged (non-finite) at epoch " + std::to_string(epoch) +
                                               " batch " + std::to_string(batch_no));
            }
        }
        EpochRecord rec = validate_epoch(tmpl, state.params, dataset, val_idx, plan);
        rec.epoch = epoch;
        rec.train_loss = loss_sum / static_cast<double>(order.size());
        const double score = std::isfinite(rec.val_auc) ? rec.val_auc : rec.val_acc;
        if (score > state.best_score || (score == state.best_score && rec.val_acc > state.best_acc)) {
            state.best_score = score;
            state.best_acc = rec.val_acc;
            state.best_epoch = epoch;
            state.best_params = state.params;
        }
        state.history.push_back(rec);
        state.next_epoch = epoch + 1;
        if (on_epoch) on_epoch(rec);
        if (stop_after_epoch && state.next_epoch >= *stop_after_epoch) break;
    }
    TrainResult result;
    result.best.values = state.best_params;
    result.state = std::move(state);
    return result;
}

namespace {

std::string num(double v) { return std::isnan(v) ? "nan" : io::format_double(v); }

void write_vector(std::ostringstream& out, const char* name, const std::vector<double>& v) {
    out << name << " " << v.size() << "\n";
    for (double x : v) out << num(x) << "\n";
}

class StateParser {
  public:
    explicit StateParser(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            const auto t = io::trim(line);
            if (!t.empty() && t.front() != '#') lines_.push_back(io::split_ws(t));
        }
    }

    TrainState parse() {
        TrainState s;
        expect_header();
        s.next_epoch = static_cast<int>(scalar_int("next_epoch"));
        s.adam.step_count = static_cast<std::size_t>(scalar_int("step"));
        s.best_epoch = static_cast<int>(scalar_int("best_epoch"));
        s.best_score = scalar_double("best_score");
        s.best_acc = scalar_double("best_acc");
        s.params = vector("PARAMS");
        s.adam.m = vector("ADAM_M");
        s.adam.v = vector("ADAM_V");
        s.best_params = vector("BEST");
        const auto n = scalar_int("HISTORY");
        for (long long i = 0; i < n; ++i) {
            const auto& row = take("HISTORY row");
            if (row.size() != 4) fail(ErrorKind::Parse, "train state: HISTORY rows have 4 fields");
            EpochRecord r;
            long long e = 0;
            if (!io::parse_int(row[0], e)) fail(ErrorKind::Parse, "train state: bad epoch index");
            r.epoch = static_cast<int>(e);
            r.train_loss = value(row[1]);
            r.val_acc = value(row[2]);
            r.val_auc = value(row[3]);
            s.history.push_back(r);
        }
        const auto& end = take("END");
        if (end.size() != 1 || end[0] != "END") fail(ErrorKind::Parse, "train state: expected END");
        if (s.adam.m.size() != s.params.size() || s.adam.v.size() != s.params.size() ||
            s.best_params.size() != s.params.size()) {
            fail(ErrorKind::Parse, "train state: vector lengths disagree");
        }
        return s;
    }

  private:
    const std::vector<std::string>& take(const std::string& what) {
        if (next_ >= lines_.size()) fail(ErrorKind::Parse, "train state truncated: missing " + what);
        return lines_[next_++];
    }
    void expect_header() {
        const auto& h = take("header");
        if (h.size() != 2 || h[0] != "VQC_TRAIN_STATE" || h[1] != "v1") fail(ErrorKind::Parse, "train state: bad header");
    }
    static double value(const std::string& s) {
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        double v = 0.0;
        if (!io::parse_double(s, v)) fail(ErrorKind::Parse, "train state: '" + s + "' is not a number");
        return v;
    }
    long long scalar_int(const std::string& key) {
        const auto& row = take(key);
        long long v = 0;
        if (row.size() != 2 || row[0] != key || !io::parse_int(row[1], v)) {
            fail(ErrorKind::Parse, "train state: expected '" + key + " <integer>'");
        }
        return v;
    }
    double scalar_double(const std::string& key) {
        const auto& row = take(key);
        if (row.size() != 2 || row[0] != key) fail(ErrorKind::Parse, "train state: expected '" + key + " <value>'");
        return value(row[1]);
    }
    std::vector<double> vector(const std::string& key) {
        const auto n = scalar_int(key);
        std::vector<double> out;
        for (long long i = 0; i < n; ++i) {
            const auto& row = take(key + " entry");
            if (row.size() != 1) fail(ErrorKind::Parse, "train state: " + key + " entries are single numbers");
            out.push_back(value(row[0]));
        }
        return out;
    }

    std::vector<std::vector<std::string>> lines_;
    std::size_t next_ = 0;
};

}  // namespace

std::string write_state(const TrainState& s) {
    std::ostringstream out;
    out << "VQC_TRAIN_STATE v1\n";
    out << "next_epoch " << s.next_epoch << "\n";
    out << "step " << s.adam.step_count << "\n";
    out << "best_epoch " << s.best_epoch << "\n";
    out << "best_score " << num(s.best_score) << "\n";
    out << "best_acc " << num(s.best_acc) << "\n";
    write_vector(out, "PARAMS", s.params);
    write_vector(out, "ADAM_M", s.adam.m);
    write_vector(out, "ADAM_V", s.adam.v);
    write_vector(out, "BEST", s.best_params);
    out << "HISTORY " << s.history.size() << "\n";
    for (const EpochRecord& r : s.history) {
        out << r.epoch << " " << num(r.train_loss) << " " << num(r.val_acc) << " " << num(r.val_auc) << "\n";
    }
    out << "END\n";
    return out.str();
}

TrainState parse_state(const std::string& text) { return StateParser(text).parse(); }

}  // namespace vqc::train
