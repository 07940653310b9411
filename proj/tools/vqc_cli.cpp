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

// Command-line front end. Talks to the library only through the C API.

#include <CLI/CLI.hpp>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "vqc/vqc.h"

namespace {

int finish(vqc_status status) {
    if (status != VQC_OK) std::fprintf(stderr, "vqc: %s: %s\n", vqc_status_name(status), vqc_last_error());
    return vqc_exit_code(status);
}

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

void print_eval(const vqc_eval_summary& r) {
    if (std::isfinite(r.auc)) {
        std::printf("%-14s acc %.4f  auc %.4f  n %zu\n", r.config, r.acc, r.auc, r.n_samples);
    } else {
        std::printf("%-14s acc %.4f  auc -  n %zu\n", r.config, r.acc, r.n_samples);
    }
}

struct InferFlags {
    std::string checkpoint, prepared, device, mitigation = "none";
    vqc_infer_options o{};
    bool weighted = false;

    void bind(CLI::App* cmd, bool with_mitigation) {
        vqc_infer_options_init(&o);
        cmd->add_option("--checkpoint", checkpoint, "Trained circuit file")->required();
        cmd->add_option("--data", prepared, "Prepared dataset (test split is evaluated)")->required();
        cmd->add_option("--device", device, "Device file (default: bundled device)");
        cmd->add_option("--shots", o.shots, "Shots per test sample")->capture_default_str();
        if (with_mitigation) {
            cmd->add_option("--mitigation", mitigation, "none, all, or dd/twirl/m3 joined by '+'")->capture_default_str();
        }
        cmd->add_option("--max-test", o.max_test, "Seeded truncation of the test split (0 keeps all)")->capture_default_str();
        cmd->add_option("--workers", o.workers, "Inference worker threads")->capture_default_str();
        cmd->add_option("--m3-tol", o.m3_tol, "Mitigation residual tolerance")->capture_default_str();
        cmd->add_option("--m3-max-iter", o.m3_max_iter, "Mitigation iteration budget")->capture_default_str();
        cmd->add_option("--calibration-shots", o.calibration_shots, "Shots per readout calibration circuit")
            ->capture_default_str();
        cmd->add_flag("--weighted-auc", weighted, "Weighted instead of macro multi-class AUC");
    }
    const vqc_infer_options& get(const std::string& out_dir, std::uint64_t seed) {
        o.checkpoint = checkpoint.c_str();
        o.prepared = prepared.c_str();
        o.device = opt(device);
        o.mitigation = mitigation.c_str();
        o.out_dir = out_dir.c_str();
        o.seed = seed;
        o.weighted_auc = weighted ? 1 : 0;
        return o;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational quantum classifier toolkit"};
    app.set_version_flag("--version", std::string(vqc_version()));
    app.set_config("--config", "", "TOML/INI configuration file; command-line flags take precedence");
    app.require_subcommand(1);

    std::string out_dir = "out";
    std::uint64_t seed = 0;
    app.add_option("--out", out_dir, "Output directory")->envname("VQC_OUT_DIR")->capture_default_str();
    app.add_option("--seed", seed, "Master seed")->capture_default_str();

    std::function<vqc_status()> run;

    // preprocess
    auto* pre = app.add_subcommand("preprocess", "Pool and normalize a raw image dataset");
    vqc_preprocess_options pre_o;
    vqc_preprocess_options_init(&pre_o);
    std::string pre_in, pre_out, pre_format = "qds";
    pre->add_option("--input", pre_in, "Raw dataset (QDS binary or CSV)")->required();
    pre->add_option("--format", pre_format, "qds or csv")->capture_default_str();
    pre->add_option("--classes", pre_o.n_classes, "Class count for CSV input (0 infers)")->capture_default_str();
    pre->add_option("--side", pre_o.out_side, "Pooled side length (features = side^2)")->capture_default_str();
    pre->add_option("--output", pre_out, "Prepared-feature file")->required();
    pre->callback([&] {
        run = [&] {
            pre_o.input = pre_in.c_str();
            pre_o.format = pre_format.c_str();
            pre_o.output = pre_out.c_str();
            pre_o.seed = seed;
            size_t n = 0, f = 0;
            const vqc_status s = vqc_preprocess(&pre_o, &n, &f);
            if (s == VQC_OK) std::printf("prepared %zu samples with %zu features -> %s\n", n, f, pre_out.c_str());
            return s;
        };
    });

    // search
    auto* srch = app.add_subcommand("search", "Score candidate circuits and select the best");
    vqc_search_options s_o;
    vqc_search_options_init(&s_o);
    std::string s_data, s_device;
    srch->add_option("--data", s_data, "Prepared dataset (training split is used)")->required();
    srch->add_option("--device", s_device, "Device file (default: bundled device)");
    srch->add_option("--qubits", s_o.n_qubits, "Circuit width")->capture_default_str();
    srch->add_option("--params", s_o.n_params, "Variational parameters per circuit")->capture_default_str();
    srch->add_option("--candidates", s_o.n_candidates, "Candidates to generate")->capture_default_str();
    srch->add_option("--replicas", s_o.m_replicas, "Clifford replicas per candidate")->capture_default_str();
    srch->add_option("--replica-shots", s_o.replica_shots, "Shots per replica")->capture_default_str();
    srch->add_option("--cnr-threshold", s_o.cnr_threshold, "Exclusion threshold")->capture_default_str();
    srch->add_option("--alpha", s_o.alpha_cnr, "Noise-resilience exponent")->capture_default_str();
    srch->add_option("--dc", s_o.d_c, "Samples per class for representation capacity")->capture_default_str();
    srch->add_option("--param-draws", s_o.repcap_param_draws, "Parameter draws per similarity entry")
        ->capture_default_str();
    srch->callback([&] {
        run = [&] {
            s_o.prepared = s_data.c_str();
            s_o.device = opt(s_device);
            s_o.out_dir = out_dir.c_str();
            s_o.seed = seed;
            vqc_search_summary sum{};
            const vqc_status s = vqc_search(&s_o, &sum);
            if (s == VQC_OK) {
                std::printf("scored %zu candidates, %zu survivors, best f_score %.6f\n", sum.n_candidates,
                            sum.n_survivors, sum.best_f_score);
            }
            return s;
        };
    });

    // train
    auto* trn = app.add_subcommand("train", "Train circuit parameters with Adam");
    vqc_train_options t_o;
    vqc_train_options_init(&t_o);
    std::string t_circuit, t_data, t_loss = "auto", t_grad = "adjoint";
    bool t_resume = false;
    trn->add_option("--circuit", t_circuit, "Circuit file from search")->required();
    trn->add_option("--data", t_data, "Prepared dataset")->required();
    trn->add_option("--epochs", t_o.epochs, "Training epochs")->capture_default_str();
    trn->add_option("--lr", t_o.learning_rate, "Adam learning rate")->capture_default_str();
    trn->add_option("--batch", t_o.batch_size, "Mini-batch size")->capture_default_str();
    trn->add_option("--loss", t_loss, "auto, mse or ce")->capture_default_str();
    trn->add_option("--gradient", t_grad, "adjoint or shift")->capture_default_str();
    trn->add_option("--val-fraction", t_o.validation_fraction, "Held-out fraction when no validation split exists")
        ->capture_default_str();
    trn->add_flag("--resume", t_resume, "Continue from <out>/train_state.txt");
    trn->add_option("--stop-after", t_o.stop_after_epoch, "Stop once this many epochs are complete (-1: never)")
        ->capture_default_str();
    trn->callback([&] {
        run = [&] {
            t_o.circuit = t_circuit.c_str();
            t_o.prepared = t_data.c_str();
            t_o.out_dir = out_dir.c_str();
            t_o.loss = t_loss.c_str();
            t_o.gradient = t_grad.c_str();
            t_o.resume = t_resume ? 1 : 0;
            t_o.seed = seed;
            vqc_train_summary sum{};
            const vqc_status s = vqc_train(&t_o, &sum);
            if (s == VQC_OK) {
                std::printf("trained %d epochs, best epoch %d (score %.4f), final loss %.6f\n", sum.epochs_completed,
                            sum.best_epoch, sum.best_score, sum.final_loss);
            }
            return s;
        };
    });

    // infer
    auto* inf = app.add_subcommand("infer", "Noisy inference with optional error suppression and mitigation");
    InferFlags inf_flags;
    inf_flags.bind(inf, true);
    inf->callback([&] {
        run = [&] {
            vqc_eval_summary r{};
            const vqc_status s = vqc_infer(&inf_flags.get(out_dir, seed), &r);
            if (s == VQC_OK) print_eval(r);
            return s;
        };
    });

    // ablate
    auto* abl = app.add_subcommand("ablate", "Four-row mitigation ablation under one seed");
    InferFlags abl_flags;
    abl_flags.bind(abl, false);
    abl->callback([&] {
        run = [&] {
            vqc_eval_summary rows[4]{};
            const vqc_status s = vqc_ablate(&abl_flags.get(out_dir, seed), rows);
            if (s == VQC_OK) {
                std::printf("seed %llu\n", static_cast<unsigned long long>(seed));
                for (const auto& r : rows) print_eval(r);
            }
            return s;
        };
    });

    // report
    auto* rep = app.add_subcommand("report", "Render a JSON report from search, infer or ablate");
    std::string rep_path;
    rep->add_option("path", rep_path, "Report file")->required();
    rep->callback([&] {
        run = [&] {
            char* text = nullptr;
            const vqc_status s = vqc_report(rep_path.c_str(), &text);
            if (s == VQC_OK) std::fputs(text, stdout);
            vqc_string_free(text);
            return s;
        };
    });

    // mitigate
    auto* mit = app.add_subcommand("mitigate", "Readout mitigation of a counts file");
    std::string m_counts, m_cal, m_out;
    double m_tol = 1e-6;
    std::size_t m_iter = 1000;
    mit->add_option("--counts", m_counts, "Counts file: one 'bitstring weight' per line")->required();
    mit->add_option("--calibration", m_cal, "Calibration file: 'a00 a01 a10 a11' per qubit")->required();
    mit->add_option("--output", m_out, "Quasi-distribution output file")->required();
    mit->add_option("--tol", m_tol, "Residual tolerance")->capture_default_str();
    mit->add_option("--max-iter", m_iter, "Iteration budget")->capture_default_str();
    mit->callback([&] {
        run = [&] {
            size_t iters = 0;
            double residual = 0.0;
            const vqc_status s =
                vqc_mitigate_files(m_counts.c_str(), m_cal.c_str(), m_out.c_str(), m_tol, m_iter, &iters, &residual);
            if (s == VQC_OK) std::printf("converged in %zu iterations (residual %.3g) -> %s\n", iters, residual, m_out.c_str());
            return s;
        };
    });

    // synth
    auto* syn = app.add_subcommand("synth", "Write a synthetic QDS dataset");
    std::string syn_kind = "two-blob", syn_out;
    int syn_train = 100, syn_test = 50, syn_side = 28;
    syn->add_option("--kind", syn_kind, "two-blob, four-corner or ring")->capture_default_str();
    syn->add_option("--train-per-class", syn_train, "Training samples per class")->capture_default_str();
    syn->add_option("--test-per-class", syn_test, "Test samples per class")->capture_default_str();
    syn->add_option("--side", syn_side, "Image side length")->capture_default_str();
    syn->add_option("--output", syn_out, "QDS output file")->required();
    syn->callback([&] {
        run = [&] { return vqc_synth(syn_kind.c_str(), syn_train, syn_test, syn_side, seed, syn_out.c_str()); };
    });

    // device
    auto* dev = app.add_subcommand("device", "Write the bundled device description");
    std::string dev_out;
    dev->add_option("--output", dev_out, "Device file")->required();
    dev->callback([&] {
        run = [&] { return vqc_write_bundled_device(dev_out.c_str()); };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return finish(run());
}
