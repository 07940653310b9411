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

#include "vqc/vqc.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "core/circuit/circuit.hpp"
#include "core/error.hpp"
#include "core/pipeline/pipeline.hpp"
#include "core/sim/statevector.hpp"

struct vqc_state {
    vqc::sim::StateVector sv;
};

struct vqc_circuit {
    vqc::circuit::CircuitDocument doc;
};

namespace {

thread_local std::string g_last_error;

vqc_status status_of(vqc::ErrorKind kind) {
    using vqc::ErrorKind;
    switch (kind) {
        case ErrorKind::Config: return VQC_ERR_CONFIG;
        case ErrorKind::Index: return VQC_ERR_INDEX;
        case ErrorKind::Validation: return VQC_ERR_VALIDATION;
        case ErrorKind::Parse: return VQC_ERR_PARSE;
        case ErrorKind::Io: return VQC_ERR_IO;
        case ErrorKind::Calibration: return VQC_ERR_CALIBRATION;
        case ErrorKind::Convergence: return VQC_ERR_CONVERGENCE;
        case ErrorKind::Numerical: return VQC_ERR_NUMERICAL;
        case ErrorKind::EmptyResult: return VQC_ERR_EMPTY_RESULT;
    }
    return VQC_ERR_INTERNAL;
}

template <class F>
vqc_status guarded(F&& f) noexcept {
    try {
        f();
        g_last_error.clear();
        return VQC_OK;
    } catch (const vqc::Error& e) {
        g_last_error = e.what();
        return status_of(e.kind());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
    } catch (const std::exception& e) {
        g_last_error = e.what();
    } catch (...) {
        g_last_error = "unknown error";
    }
    return VQC_ERR_INTERNAL;
}

std::string str(const char* s) { return s ? std::string(s) : std::string(); }

template <class T>
void require(const T* p, const char* what) {
    if (p == nullptr) vqc::fail(vqc::ErrorKind::Config, std::string(what) + " must not be NULL");
}

void fill_summary(vqc_eval_summary& out, const std::string& name, const vqc::metrics::EvaluationReport& r) {
    std::memset(out.config, 0, sizeof(out.config));
    std::strncpy(out.config, name.c_str(), sizeof(out.config) - 1);
    out.acc = r.acc;
    out.auc = r.auc;
    out.n_samples = r.n_samples;
}

vqc::pipeline::InferOptions infer_options(const vqc_infer_options* o) {
    require(o, "options");
    vqc::pipeline::InferOptions io;
    io.checkpoint = str(o->checkpoint);
    io.prepared = str(o->prepared);
    io.device = str(o->device);
    io.out_dir = str(o->out_dir);
    io.seed = o->seed;
    io.shots = o->shots;
    io.flags = vqc::pipeline::MitigationFlags::parse(str(o->mitigation));
    io.max_test = o->max_test;
    io.workers = o->workers;
    io.m3_tol = o->m3_tol;
    io.m3_max_iter = o->m3_max_iter;
    io.calibration_shots = o->calibration_shots;
    io.averaging = o->weighted_auc ? vqc::metrics::Averaging::Weighted : vqc::metrics::Averaging::Macro;
    return io;
}

}  // namespace

extern "C" {

const char* vqc_version(void) { return vqc::pipeline::tool_version(); }

const char* vqc_last_error(void) { return g_last_error.c_str(); }

const char* vqc_status_name(vqc_status status) {
    switch (status) {
        case VQC_OK: return "ok";
        case VQC_ERR_CONFIG: return "configuration error";
        case VQC_ERR_INDEX: return "index error";
        case VQC_ERR_VALIDATION: return "validation error";
        case VQC_ERR_PARSE: return "parse error";
        case VQC_ERR_IO: return "i/o error";
        case VQC_ERR_CALIBRATION: return "calibration error";
        case VQC_ERR_CONVERGENCE: return "convergence error";
        case VQC_ERR_NUMERICAL: return "numerical error";
        case VQC_ERR_EMPTY_RESULT: return "empty result";
        case VQC_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

int vqc_exit_code(vqc_status status) {
    switch (status) {
        case VQC_OK: return 0;
        case VQC_ERR_EMPTY_RESULT: return 3;
        case VQC_ERR_NUMERICAL:
        case VQC_ERR_CONVERGENCE: return 4;
        case VQC_ERR_INTERNAL: return 1;
        default: return 2;
    }
}

vqc_status vqc_state_create(int n_qubits, vqc_state** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        *out = new vqc_state{vqc::sim::init_state(n_qubits)};
    });
}

void vqc_state_destroy(vqc_state* state) { delete state; }

vqc_status vqc_state_apply(vqc_state* state, const char* gate, int target, int control, double angle) {
    return guarded([&] {
        require(state, "state");
        require(gate, "gate");
        const auto kind = vqc::sim::parse_gate_name(gate);
        if (!kind) vqc::fail(vqc::ErrorKind::Parse, std::string("unknown gate '") + gate + "'");
        using vqc::sim::GateOp;
        if (*kind == vqc::sim::GateKind::CNOT) {
            state->sv.apply(GateOp::cnot(control, target));
        } else if (vqc::sim::is_rotation(*kind)) {
            state->sv.apply(GateOp::rotation(*kind, target, angle));
        } else {
            state->sv.apply(GateOp::fixed(*kind, target));
        }
    });
}

vqc_status vqc_state_norm(const vqc_state* state, double* out) {
    return guarded([&] {
        require(state, "state");
        require(out, "out");
        *out = state->sv.norm_squared();
    });
}

vqc_status vqc_state_expectation_z(const vqc_state* state, int qubit, double* out) {
    return guarded([&] {
        require(state, "state");
        require(out, "out");
        *out = vqc::sim::expectation_z(state->sv, qubit);
    });
}

vqc_status vqc_state_sample(const vqc_state* state, const int* measured, size_t n_measured, uint64_t shots,
                            uint64_t seed, uint64_t* histogram) {
    return guarded([&] {
        require(state, "state");
        require(histogram, "histogram");
        if (n_measured > 0) require(measured, "measured");
        const std::vector<int> m(measured, measured + n_measured);
        const auto h = vqc::sim::sample_histogram(state->sv, m, shots, seed);
        std::copy(h.begin(), h.end(), histogram);
    });
}

vqc_status vqc_circuit_load(const char* path, vqc_circuit** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = nullptr;
        *out = new vqc_circuit{vqc::circuit::load_circuit(path)};
    });
}

void vqc_circuit_destroy(vqc_circuit* circuit) { delete circuit; }

vqc_status vqc_circuit_get_info(const vqc_circuit* circuit, vqc_circuit_info* out) {
    return guarded([&] {
        require(circuit, "circuit");
        require(out, "out");
        const auto& t = circuit->doc.tmpl;
        out->n_qubits = t.n_qubits;
        out->n_embed = t.n_embed();
        out->n_params = t.n_params();
        out->n_measured = t.measured_qubits.size();
        out->gate_count = t.gate_count();
        out->depth = vqc::circuit::circuit_depth(t);
        out->has_params = circuit->doc.params.has_value() ? 1 : 0;
    });
}

vqc_status vqc_circuit_expectations(const vqc_circuit* circuit, const double* features, size_t n_features,
                                    const double* params, size_t n_params, double* out, size_t n_out) {
    return guarded([&] {
        require(circuit, "circuit");
        require(out, "out");
        const auto& doc = circuit->doc;
        if (n_features > 0) require(features, "features");
        std::vector<double> p;
        if (params != nullptr) {
            p.assign(params, params + n_params);
        } else if (doc.params) {
            p = doc.params->values;
        } else {
            vqc::fail(vqc::ErrorKind::Config, "circuit has no stored parameters and none were given");
        }
        if (n_out < doc.tmpl.measured_qubits.size()) vqc::fail(vqc::ErrorKind::Config, "output buffer too small");
        const auto f = vqc::circuit::FeatureVector::make(std::vector<double>(features, features + n_features));
        const auto gates = vqc::circuit::bind(doc.tmpl, f, vqc::circuit::ParameterVector{p});
        const auto state = vqc::sim::run_circuit(doc.tmpl.n_qubits, gates);
        for (std::size_t j = 0; j < doc.tmpl.measured_qubits.size(); ++j) {
            out[j] = vqc::sim::expectation_z(state, doc.tmpl.measured_qubits[j]);
        }
    });
}

void vqc_preprocess_options_init(vqc_preprocess_options* o) {
    if (!o) return;
    *o = {};
    o->format = "qds";
    o->out_side = 7;
}

vqc_status vqc_preprocess(const vqc_preprocess_options* o, size_t* n_samples, size_t* n_features) {
    return guarded([&] {
        require(o, "options");
        vqc::pipeline::PreprocessOptions p;
        p.input = str(o->input);
        const std::string format = str(o->format);
        if (format == "qds" || format.empty()) {
            p.format = vqc::data::Format::QdsBinary;
        } else if (format == "csv") {
            p.format = vqc::data::Format::Csv;
        } else {
            vqc::fail(vqc::ErrorKind::Config, "unknown dataset format '" + format + "' (use qds or csv)");
        }
        p.n_classes = o->n_classes;
        p.out_side = o->out_side;
        p.output = str(o->output);
        p.seed = o->seed;
        const auto s = vqc::pipeline::cmd_preprocess(p);
        if (n_samples) *n_samples = s.n_samples;
        if (n_features) *n_features = s.n_features;
    });
}

void vqc_search_options_init(vqc_search_options* o) {
    if (!o) return;
    *o = {};
    const vqc::pipeline::SearchOptions d;
    o->out_dir = "out";
    o->n_qubits = d.n_qubits;
    o->n_params = d.n_params;
    o->n_candidates = d.search.n_candidates;
    o->m_replicas = d.search.m_replicas;
    o->replica_shots = d.search.replica_shots;
    o->cnr_threshold = d.search.cnr_threshold;
    o->alpha_cnr = d.search.alpha_cnr;
    o->d_c = d.search.d_c;
    o->repcap_param_draws = d.search.repcap_param_draws;
}

vqc_status vqc_search(const vqc_search_options* o, vqc_search_summary* summary) {
    return guarded([&] {
        require(o, "options");
        vqc::pipeline::SearchOptions s;
        s.prepared = str(o->prepared);
        s.device = str(o->device);
        s.out_dir = str(o->out_dir);
        s.n_qubits = o->n_qubits;
        s.n_params = o->n_params;
        s.search.seed = o->seed;
        s.search.n_candidates = o->n_candidates;
        s.search.m_replicas = o->m_replicas;
        s.search.replica_shots = o->replica_shots;
        s.search.cnr_threshold = o->cnr_threshold;
        s.search.alpha_cnr = o->alpha_cnr;
        s.search.d_c = o->d_c;
        s.search.repcap_param_draws = o->repcap_param_draws;
        if (summary) {
            summary->n_candidates = 0;
            summary->n_survivors = 0;
            summary->best_f_score = std::numeric_limits<double>::quiet_NaN();
        }
        try {
            const auto r = vqc::pipeline::cmd_search(s);
            if (summary) {
                summary->n_candidates = r.n_candidates;
                summary->n_survivors = r.n_survivors;
                summary->best_f_score = r.best_f_score.value_or(std::numeric_limits<double>::quiet_NaN());
            }
        } catch (const vqc::Error& e) {
            if (e.kind() == vqc::ErrorKind::EmptyResult && summary) summary->n_candidates = o->n_candidates;
            throw;
        }
    });
}

void vqc_train_options_init(vqc_train_options* o) {
    if (!o) return;
    *o = {};
    const vqc::train::TrainConfig d;
    o->out_dir = "out";
    o->epochs = d.epochs;
    o->learning_rate = d.learning_rate;
    o->batch_size = d.batch_size;
    o->loss = "auto";
    o->gradient = "adjoint";
    o->validation_fraction = d.validation_fraction;
    o->stop_after_epoch = -1;
}

vqc_status vqc_train(const vqc_train_options* o, vqc_train_summary* summary) {
    return guarded([&] {
        require(o, "options");
        vqc::pipeline::TrainOptions t;
        t.circuit = str(o->circuit);
        t.prepared = str(o->prepared);
        t.out_dir = str(o->out_dir);
        t.train.seed = o->seed;
        t.train.epochs = o->epochs;
        t.train.learning_rate = o->learning_rate;
        t.train.batch_size = o->batch_size;
        t.train.validation_fraction = o->validation_fraction;
        const std::string loss = str(o->loss);
        if (loss == "mse") {
            t.train.loss_kind = vqc::train::LossKind::MSE;
        } else if (loss == "ce") {
            t.train.loss_kind = vqc::train::LossKind::CrossEntropy;
        } else if (loss != "auto" && !loss.empty()) {
            vqc::fail(vqc::ErrorKind::Config, "unknown loss '" + loss + "' (use auto, mse or ce)");
        }
        const std::string grad = str(o->gradient);
        if (grad == "shift") {
            t.train.gradient_mode = vqc::train::GradientMode::ParameterShift;
        } else if (grad != "adjoint" && !grad.empty()) {
            vqc::fail(vqc::ErrorKind::Config, "unknown gradient mode '" + grad + "' (use adjoint or shift)");
        }
        t.resume = o->resume != 0;
        if (o->stop_after_epoch >= 0) t.stop_after_epoch = o->stop_after_epoch;
        const auto r = vqc::pipeline::cmd_train(t);
        if (summary) {
            summary->epochs_completed = r.epochs_completed;
            summary->best_epoch = r.best_epoch;
            summary->best_score = r.best_score;
            summary->final_loss = r.final_loss;
        }
    });
}

void vqc_infer_options_init(vqc_infer_options* o) {
    if (!o) return;
    *o = {};
    const vqc::pipeline::InferOptions d;
    o->out_dir = "out";
    o->shots = d.shots;
    o->mitigation = "none";
    o->workers = d.workers;
    o->m3_tol = d.m3_tol;
    o->m3_max_iter = d.m3_max_iter;
    o->calibration_shots = d.calibration_shots;
}

vqc_status vqc_infer(const vqc_infer_options* o, vqc_eval_summary* summary) {
    return guarded([&] {
        const auto io = infer_options(o);
        const auto r = vqc::pipeline::cmd_infer(io);
        if (summary) fill_summary(*summary, io.flags.to_string(), r);
    });
}

vqc_status vqc_ablate(const vqc_infer_options* o, vqc_eval_summary rows[4]) {
    return guarded([&] {
        const auto io = infer_options(o);
        const auto table = vqc::pipeline::cmd_ablate(io);
        if (rows) {
            for (std::size_t i = 0; i < table.size() && i < 4; ++i) fill_summary(rows[i], table[i].name, table[i].report);
        }
    });
}

vqc_status vqc_report(const char* path, char** text) {
    return guarded([&] {
        require(path, "path");
        require(text, "text");
        *text = nullptr;
        const std::string s = vqc::pipeline::cmd_report(path);
        char* buf = new char[s.size() + 1];
        std::memcpy(buf, s.c_str(), s.size() + 1);
        *text = buf;
    });
}

void vqc_string_free(char* text) { delete[] text; }

vqc_status vqc_mitigate_files(const char* counts_path, const char* calibration_path, const char* output, double tol,
                              size_t max_iter, size_t* iterations, double* residual) {
    return guarded([&] {
        require(output, "output");
        const auto q = vqc::pipeline::cmd_mitigate(str(counts_path), str(calibration_path), output, tol, max_iter);
        if (iterations) *iterations = q.iterations;
        if (residual) *residual = q.residual;
    });
}

vqc_status vqc_synth(const char* kind, int n_per_class, int n_test_per_class, int side, uint64_t seed,
                     const char* output) {
    return guarded([&] {
        const std::string k = str(kind);
        vqc::data::SynthKind sk{};
        if (k == "two-blob") {
            sk = vqc::data::SynthKind::TwoBlob;
        } else if (k == "four-corner") {
            sk = vqc::data::SynthKind::FourCorner;
        } else if (k == "ring") {
            sk = vqc::data::SynthKind::Ring;
        } else {
            vqc::fail(vqc::ErrorKind::Config, "unknown synthetic dataset '" + k + "' (use two-blob, four-corner, ring)");
        }
        vqc::pipeline::cmd_synth(sk, n_per_class, n_test_per_class, side, seed, str(output));
    });
}

vqc_status vqc_write_bundled_device(const char* output) {
    return guarded([&] {
        require(output, "output");
        vqc::pipeline::cmd_device(output);
    });
}

}  // extern "C"
