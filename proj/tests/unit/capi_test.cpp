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
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("vqc_capi_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(capi, version_and_status_names) {
    EXPECT_STREQ(vqc_version(), "0.1.0");
    EXPECT_STREQ(vqc_status_name(VQC_OK), "ok");
    EXPECT_EQ(vqc_exit_code(VQC_OK), 0);
    for (auto s : {VQC_ERR_CONFIG, VQC_ERR_INDEX, VQC_ERR_VALIDATION, VQC_ERR_PARSE, VQC_ERR_IO, VQC_ERR_CALIBRATION}) {
        EXPECT_EQ(vqc_exit_code(s), 2) << vqc_status_name(s);
    }
    EXPECT_EQ(vqc_exit_code(VQC_ERR_EMPTY_RESULT), 3);
    EXPECT_EQ(vqc_exit_code(VQC_ERR_CONVERGENCE), 4);
    EXPECT_EQ(vqc_exit_code(VQC_ERR_NUMERICAL), 4);
    EXPECT_EQ(vqc_exit_code(VQC_ERR_INTERNAL), 1);
}

TEST(capi, state_handle) {
    vqc_state* s = nullptr;
    ASSERT_EQ(vqc_state_create(2, &s), VQC_OK);
    ASSERT_EQ(vqc_state_apply(s, "H", 0, -1, 0.0), VQC_OK);
    ASSERT_EQ(vqc_state_apply(s, "CNOT", 1, 0, 0.0), VQC_OK);
    double norm = 0.0, z = 1.0;
    ASSERT_EQ(vqc_state_norm(s, &norm), VQC_OK);
    EXPECT_NEAR(norm, 1.0, 1e-12);
    ASSERT_EQ(vqc_state_expectation_z(s, 1, &z), VQC_OK);
    EXPECT_NEAR(z, 0.0, 1e-12);
    const int measured[] = {0, 1};
    std::vector<std::uint64_t> h(4, 0);
    ASSERT_EQ(vqc_state_sample(s, measured, 2, 1000, 7, h.data()), VQC_OK);
    EXPECT_EQ(h[1] + h[2], 0u);
    EXPECT_EQ(h[0] + h[3], 1000u);

    EXPECT_EQ(vqc_state_apply(s, "X", 2, -1, 0.0), VQC_ERR_INDEX);
    EXPECT_NE(std::strlen(vqc_last_error()), 0u);
    EXPECT_EQ(vqc_state_apply(s, "FOO", 0, -1, 0.0), VQC_ERR_PARSE);
    EXPECT_EQ(vqc_state_create(13, &s), VQC_ERR_CONFIG);
    EXPECT_EQ(vqc_state_norm(nullptr, &norm), VQC_ERR_CONFIG);
    vqc_state_destroy(s);
    vqc_state_destroy(nullptr);
}

TEST(capi, stage_chain_and_exit_codes) {
    const fs::path dir = temp_dir("capi");
    const auto raw = (dir / "raw.qds").string(), prep = (dir / "prep.qdf").string();
    ASSERT_EQ(vqc_synth("two-blob", 30, 10, 28, 1, raw.c_str()), VQC_OK) << vqc_last_error();
    EXPECT_EQ(vqc_synth("spiral", 30, 10, 28, 1, raw.c_str()), VQC_ERR_CONFIG);

    vqc_preprocess_options pre;
    vqc_preprocess_options_init(&pre);
    EXPECT_EQ(pre.out_side, 7);
    pre.input = raw.c_str();
    pre.output = prep.c_str();
    size_t n = 0, f = 0;
    ASSERT_EQ(vqc_preprocess(&pre, &n, &f), VQC_OK) << vqc_last_error();
    EXPECT_EQ(n, 80u);
    EXPECT_EQ(f, 49u);
    const auto missing = (dir / "nope.qds").string();
    pre.input = missing.c_str();
    const auto st = vqc_preprocess(&pre, &n, &f);
    EXPECT_EQ(vqc_exit_code(st), 2);
    EXPECT_NE(std::string(vqc_last_error()).find("nope.qds"), std::string::npos);

    vqc_search_options so;
    vqc_search_options_init(&so);
    EXPECT_EQ(so.n_candidates, 250u);
    EXPECT_EQ(so.m_replicas, 32u);
    EXPECT_EQ(so.replica_shots, 10000u);
    EXPECT_DOUBLE_EQ(so.cnr_threshold, 0.7);
    EXPECT_DOUBLE_EQ(so.alpha_cnr, 0.5);
    EXPECT_EQ(so.d_c, 16u);
    const auto sdir = (dir / "search").string();
    so.prepared = prep.c_str();
    so.out_dir = sdir.c_str();
    so.n_params = 16;
    so.n_candidates = 4;
    so.m_replicas = 4;
    so.replica_shots = 1000;
    so.d_c = 8;
    vqc_search_summary ss;
    ASSERT_EQ(vqc_search(&so, &ss), VQC_OK) << vqc_last_error();
    EXPECT_EQ(ss.n_candidates, 4u);
    EXPECT_GE(ss.n_survivors, 1u);
    so.cnr_threshold = 1.0;
    const auto none_dir = (dir / "search_none").string();
    so.out_dir = none_dir.c_str();
    EXPECT_EQ(vqc_exit_code(vqc_search(&so, &ss)), 3);
    EXPECT_NE(std::string(vqc_last_error()).find("no survivor"), std::string::npos);

    vqc_circuit* c = nullptr;
    const auto best = (dir / "search" / "best_circuit.qc").string();
    ASSERT_EQ(vqc_circuit_load(best.c_str(), &c), VQC_OK);
    vqc_circuit_info info;
    ASSERT_EQ(vqc_circuit_get_info(c, &info), VQC_OK);
    EXPECT_EQ(info.n_qubits, 4);
    EXPECT_EQ(info.n_embed, 49u);
    EXPECT_EQ(info.n_params, 16u);
    std::vector<double> feats(49, 0.0), params(16, 0.0), out(info.n_measured, 0.0);
    ASSERT_EQ(vqc_circuit_expectations(c, feats.data(), 49, params.data(), 16, out.data(), out.size()), VQC_OK);
    for (double v : out) EXPECT_NEAR(v, 1.0, 1e-12);
    EXPECT_EQ(vqc_circuit_expectations(c, feats.data(), 48, params.data(), 16, out.data(), out.size()), VQC_ERR_VALIDATION);
    vqc_circuit_destroy(c);

    vqc_train_options to;
    vqc_train_options_init(&to);
    EXPECT_EQ(to.epochs, 200);
    EXPECT_DOUBLE_EQ(to.learning_rate, 0.01);
    EXPECT_EQ(to.batch_size, 128u);
    const auto tdir = (dir / "train").string();
    to.circuit = best.c_str();
    to.prepared = prep.c_str();
    to.out_dir = tdir.c_str();
    to.epochs = 5;
    to.learning_rate = 0.05;
    to.batch_size = 16;
    vqc_train_summary ts;
    ASSERT_EQ(vqc_train(&to, &ts), VQC_OK) << vqc_last_error();
    EXPECT_EQ(ts.epochs_completed, 5);
    to.loss = "hinge";
    EXPECT_EQ(vqc_train(&to, &ts), VQC_ERR_CONFIG);
    to.loss = "auto";
    to.learning_rate = 1e308;
    const auto tdir_bad = (dir / "train_bad").string();
    to.out_dir = tdir_bad.c_str();
    EXPECT_EQ(vqc_exit_code(vqc_train(&to, &ts)), 4);
    EXPECT_NE(std::string(vqc_last_error()).find("epoch"), std::string::npos);

    vqc_infer_options io;
    vqc_infer_options_init(&io);
    EXPECT_EQ(io.shots, 32000u);
    const auto ckpt = (dir / "train" / "checkpoint.qc").string();
    const auto idir = (dir / "infer").string();
    io.checkpoint = ckpt.c_str();
    io.prepared = prep.c_str();
    io.out_dir = idir.c_str();
    io.shots = 2000;
    io.calibration_shots = 2000;
    io.mitigation = "all";
    vqc_eval_summary es;
    ASSERT_EQ(vqc_infer(&io, &es), VQC_OK) << vqc_last_error();
    EXPECT_EQ(es.n_samples, 20u);
    EXPECT_STREQ(es.config, "dd+twirl+m3");
    io.mitigation = "bogus";
    EXPECT_EQ(vqc_infer(&io, &es), VQC_ERR_CONFIG);
    io.mitigation = "none";
    vqc_eval_summary rows[4];
    ASSERT_EQ(vqc_ablate(&io, rows), VQC_OK) << vqc_last_error();
    EXPECT_STREQ(rows[0].config, "none");
    EXPECT_STREQ(rows[3].config, "DD+Twirl+M3");

    char* text = nullptr;
    const auto report = (dir / "infer" / "ablation.json").string();
    ASSERT_EQ(vqc_report(report.c_str(), &text), VQC_OK) << vqc_last_error();
    EXPECT_NE(std::string(text).find("DD+Twirl"), std::string::npos);
    vqc_string_free(text);
    EXPECT_EQ(vqc_exit_code(vqc_report(missing.c_str(), &text)), 2);

    const auto dev = (dir / "device.txt").string();
    ASSERT_EQ(vqc_write_bundled_device(dev.c_str()), VQC_OK);
    EXPECT_NE(slurp(dev).find("GATE_ERRORS"), std::string::npos);
}

TEST(capi, mitigate_files) {
    const fs::path dir = temp_dir("capi_mit");
    std::ofstream(dir / "counts.txt") << "0 690\n1 310\n";
    std::ofstream(dir / "cal.txt") << "0.9 0.2 0.1 0.8\n";
    size_t iterations = 0;
    double residual = 1.0;
    const auto out = (dir / "q.txt").string();
    ASSERT_EQ(vqc_mitigate_files((dir / "counts.txt").c_str(), (dir / "cal.txt").c_str(), out.c_str(), 1e-9, 1000,
                                 &iterations, &residual),
              VQC_OK)
        << vqc_last_error();
    EXPECT_GT(iterations, 1u);
    EXPECT_LT(residual, 1e-9);
    std::ofstream(dir / "bad_cal.txt") << "0.9 0.2 0.2 0.8\n";
    EXPECT_EQ(vqc_mitigate_files((dir / "counts.txt").c_str(), (dir / "bad_cal.txt").c_str(), out.c_str(), 1e-9, 1000,
                                 &iterations, &residual),
              VQC_ERR_CALIBRATION);
    EXPECT_EQ(vqc_mitigate_files((dir / "counts.txt").c_str(), (dir / "cal.txt").c_str(), out.c_str(), 1e-300, 2,
                                 &iterations, &residual),
              VQC_ERR_CONVERGENCE);
}
