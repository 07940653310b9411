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
#include <utility>
#include <vector>

#include "core/data/dataset.hpp"
#include "core/metrics/metrics.hpp"
#include "core/mitigation/m3.hpp"
#include "core/search/search.hpp"
#include "core/train/trainer.hpp"

namespace vqc::pipeline {

const char* tool_version() noexcept;

/// Tool version, master seed and input hashes carried by every artifact.
struct Provenance {
    std::string stage;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> inputs;  // name -> fingerprint
    std::vector<std::pair<std::string, std::string>> settings;

    void add_input(const std::string& name, const std::string& path);
    void add_setting(const std::string& key, const std::string& value) { settings.emplace_back(key, value); }
    /// "key value" lines without the comment marker.
    std::vector<std::string> lines() const;
};

struct MitigationFlags {
    bool dd = false;
    bool twirl = false;
    bool m3 = false;

    /// Accepts "none", "all", or tokens dd, twirl, m3 joined by '+' or ','.
    static MitigationFlags parse(const std::string& text);
    std::string to_string() const;

    friend bool operator==(const MitigationFlags&, const MitigationFlags&) = default;
};

struct PreprocessOptions {
    std::string input;
    data::Format format = data::Format::QdsBinary;
    int n_classes = 0;  // CSV only; 0 infers from labels
    int out_side = 7;
    std::string output;
    std::uint64_t seed = 0;
};

struct PreprocessSummary {
    std::size_t n_samples = 0;
    std::size_t n_features = 0;
};

PreprocessSummary cmd_preprocess(const PreprocessOptions& options);

struct SearchOptions {
    std::string prepared;
    std::string device;  // empty: bundled device
    std::string out_dir = "out";
    int n_qubits = 4;
    std::size_t n_params = 80;
    search::SearchConfig search;
};

struct SearchSummary {
    std::size_t n_candidates = 0;
    std::size_t n_survivors = 0;
    std::optional<double> best_f_score;
    std::string report_path;
    std::string best_circuit_path;
};

/// Writes search_report.txt, search_report.json and best_circuit.qc. Throws
/// an EmptyResult error after writing the report when nothing survives.
SearchSummary cmd_search(const SearchOptions& options);

struct TrainOptions {
    std::string circuit;
    std::string prepared;
    std::string out_dir = "out";
    train::TrainConfig train;
    bool resume = false;
    std::optional<int> stop_after_epoch;
};

struct TrainSummary {
    int epochs_completed = 0;
    int best_epoch = -1;
    double best_score = 0.0;
    double final_loss = 0.0;
    std::string checkpoint_path;
};

/// Writes checkpoint.qc (circuit plus best parameters), train_state.txt for
/// --resume, and history.tsv.
TrainSummary cmd_train(const TrainOptions& options);

struct InferOptions {
    std::string checkpoint;
    std::string prepared;
    std::string device;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    std::uint64_t shots = 32000;
    MitigationFlags flags;
    std::size_t max_test = 0;  // 0 keeps every test sample
    unsigned workers = 1;
    double m3_tol = 1e-6;
    std::size_t m3_max_iter = 1000;
    std::uint64_t calibration_shots = 32000;
    metrics::Averaging averaging = metrics::Averaging::Macro;
};

metrics::EvaluationReport cmd_infer(const InferOptions& options);

struct AblationRow {
    std::string name;
    MitigationFlags flags;
    metrics::EvaluationReport report;
};

/// The four configurations none, DD+Twirl, M3, DD+Twirl+M3 under one seed;
/// `options.flags` is ignored.
std::vector<AblationRow> cmd_ablate(const InferOptions& options);

/// Human-readable rendering of a JSON report written by search, infer or
/// ablate.
std::string cmd_report(const std::string& path);

mitigation::QuasiDistribution cmd_mitigate(const std::string& counts_path, const std::string& calibration_path,
                                           const std::string& output, double tol, std::size_t max_iter);

void cmd_synth(data::SynthKind kind, int n_per_class, int n_test_per_class, int side, std::uint64_t seed,
               const std::string& output);

void cmd_device(const std::string& output);

/// Seeded truncation of the test split to at most `max_test` samples, in
/// ascending index order.
std::vector<std::size_t> select_test_indices(const data::PreparedDataset& dataset, std::size_t max_test,
                                             std::uint64_t seed);

}  // namespace vqc::pipeline
