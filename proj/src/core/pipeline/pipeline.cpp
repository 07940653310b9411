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

#include "core/pipeline/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cmath>
#include <exception>
#include <filesystem>
#include <limits>
#include <nlohmann/json.hpp>
#include <iomanip>
#include <sstream>
#include <thread>

#include "core/circuit/circuit.hpp"
#include "core/circuit/device.hpp"
#include "core/error.hpp"
#include "core/io.hpp"
#include "core/noise/noise_model.hpp"
#include "core/rng.hpp"

#ifndef VQC_VERSION_STRING
#define VQC_VERSION_STRING "0.0.0"
#endif

namespace vqc::pipeline {

using json = nlohmann::ordered_json;

const char* tool_version() noexcept { return VQC_VERSION_STRING; }

namespace {

void require_file(const std::string& path, const std::string& what) {
    if (path.empty()) fail(ErrorKind::Config, what + " path is required");
    if (!io::file_exists(path)) fail(ErrorKind::Io, what + " not found: " + path);
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

circuit::DeviceDescription device_from(const std::string& path, Provenance& prov) {
    if (path.empty()) {
        const auto d = circuit::bundled_device();
        prov.inputs.emplace_back("device", "bundled:" + io::fingerprint(circuit::write_device(d)));
        return d;
    }
    require_file(path, "device file");
    prov.add_input("device", path);
    return circuit::load_device(path);
}

json provenance_json(const Provenance& p) {
    json j;
    j["tool"] = "vqc";
    j["version"] = tool_version();
    j["stage"] = p.stage;
    j["seed"] = p.seed;
    json inputs = json::object();
    for (const auto& [k, v] : p.inputs) inputs[k] = v;
    j["inputs"] = inputs;
    json settings = json::object();
    for (const auto& [k, v] : p.settings) settings[k] = v;
    j["settings"] = settings;
    return j;
}

std::string comment_block(const Provenance& p) {
    std::string out;
    for (const auto& l : p.lines()) out += "# " + l + "\n";
    return out;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string fmt(double v) { return std::isfinite(v) ? io::format_double(v) : "nan"; }

std::string fixed4(double v) {
    if (!std::isfinite(v)) return "-";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

void Provenance::add_input(const std::string& name, const std::string& path) {
    inputs.emplace_back(name, io::file_fingerprint(path));
}

std::vector<std::string> Provenance::lines() const {
    std::vector<std::string> out;
    out.push_back(std::string("tool vqc ") + tool_version());
    out.push_back("stage " + stage);
    out.push_back("seed " + std::to_string(seed));
    for (const auto& [k, v] : inputs) out.push_back("input " + k + " " + v);
    for (const auto& [k, v] : settings) out.push_back(k + " " + v);
    return out;
}

MitigationFlags MitigationFlags::parse(const std::string& text) {
    MitigationFlags f;
    if (text == "none" || text.empty()) return f;
    if (text == "all") return {true, true, true};
    std::string token;
    std::istringstream in(text);
    const auto apply = [&f, &text](const std::string& t) {
        if (t == "dd") f.dd = true;
        else if (t == "twirl") f.twirl = true;
        else if (t == "m3") f.m3 = true;
        else fail(ErrorKind::Config, "unknown mitigation flag '" + t + "' in '" + text + "' (use none, dd, twirl, m3, all)");
    };
    std::string current;
    for (char c : text) {
        if (c == '+' || c == ',') {
            apply(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    apply(current);
    return f;
}

std::string MitigationFlags::to_string() const {
    std::string out;
    const auto add = [&out](bool on, const char* name) {
        if (!on) return;
        if (!out.empty()) out += "+";
        out += name;
    };
    add(dd, "dd");
    add(twirl, "twirl");
    add(m3, "m3");
    return out.empty() ? "none" : out;
}

PreprocessSummary cmd_preprocess(const PreprocessOptions& options) {
    require_file(options.input, "raw dataset");
    if (options.output.empty()) fail(ErrorKind::Config, "output path is required");
    const data::RawDataset raw = data::load(options.input, options.format, options.n_classes);
    data::PreparedDataset prepared = data::prepare(raw, options.out_side);
    Provenance prov{"preprocess", options.seed, {}, {}};
    prov.add_input("raw", options.input);
    prov.add_setting("out_side", std::to_string(options.out_side));
    prepared.provenance = comment_block(prov);
    data::save_prepared(prepared, options.output);
    return {prepared.size(), prepared.n_features()};
}

SearchSummary cmd_search(const SearchOptions& options) {
    require_file(options.prepared, "prepared dataset");
    options.search.validate();
    Provenance prov{"search", options.search.seed, {}, {}};
    prov.add_input("prepared", options.prepared);
    const circuit::DeviceDescription device = device_from(options.device, prov);
    const data::PreparedDataset ds = data::load_prepared(options.prepared);
    const data::PreparedDataset train_ds = ds.subset(ds.indices_of(data::Split::Train));
    if (train_ds.size() == 0) fail(ErrorKind::Config, "prepared dataset has no training samples");
    if (options.n_qubits < train::measured_count_for(ds.n_classes)) {
        fail(ErrorKind::Config, std::to_string(ds.n_classes) + " classes need at least " +
                                    std::to_string(train::measured_count_for(ds.n_classes)) + " qubits");
    }
    prov.add_setting("n_qubits", std::to_string(options.n_qubits));
    prov.add_setting("n_params", std::to_string(options.n_params));

    auto candidates = search::generate_candidates(options.search, device, options.n_qubits, ds.n_features(),
                                                  options.n_params);
    for (auto& c : candidates) {
        c.measured_qubits = train::MeasurementPlan::for_classes(ds.n_classes, c.measured_qubits).measured_qubits;
    }
    const noise::NoiseModel noise = noise::NoiseModel::from_device(device, candidates.front().layout);
    const search::SearchResult result = search::score_and_select(candidates, noise, train_ds, options.search);

    SearchSummary summary;
    summary.n_candidates = result.ledger.size();
    summary.n_survivors = result.survivors();
    summary.report_path = join_path(options.out_dir, "search_report.txt");
    io::write_file(summary.report_path, comment_block(prov) + search::report_text(result, options.search));

    json j;
    j["kind"] = "search";
    j["provenance"] = provenance_json(prov);
    const auto& c = options.search;
    j["config"] = {{"n_candidates", c.n_candidates}, {"m_replicas", c.m_replicas},
                   {"replica_shots", c.replica_shots}, {"cnr_threshold", c.cnr_threshold},
                   {"alpha_cnr", c.alpha_cnr}, {"d_c", c.d_c}, {"repcap_param_draws", c.repcap_param_draws}};
    j["survivors"] = result.survivors();
    json rows = json::array();
    for (const auto& s : result.ledger) {
        rows.push_back({{"id", s.tmpl.id}, {"gates", s.tmpl.gate_count()}, {"depth", s.depth}, {"cnr", s.cnr},
                        {"repcap", s.repcap ? json(*s.repcap) : json(nullptr)},
                        {"f_score", s.f_score ? json(*s.f_score) : json(nullptr)},
                        {"excluded", !s.passed_threshold}});
    }
    j["ledger"] = rows;
    io::write_file(join_path(options.out_dir, "search_report.json"), j.dump(2) + "\n");

    if (!result.best) {
        fail(ErrorKind::EmptyResult, "no survivor: all " + std::to_string(result.ledger.size()) +
                                         " candidates fell below the CNR threshold " + fmt(options.search.cnr_threshold));
    }
    summary.best_f_score = result.ledger.front().f_score;
    summary.best_circuit_path = join_path(options.out_dir, "best_circuit.qc");
    circuit::save_circuit({*result.best, std::nullopt, prov.lines()}, summary.best_circuit_path);
    return summary;
}

TrainSummary cmd_train(const TrainOptions& options) {
    require_file(options.circuit, "circuit file");
    require_file(options.prepared, "prepared dataset");
    options.train.validate();
    const circuit::CircuitDocument doc = circuit::load_circuit(options.circuit);
    const data::PreparedDataset ds = data::load_prepared(options.prepared);
    const auto plan = train::MeasurementPlan::for_classes(ds.n_classes, doc.tmpl.measured_qubits);
    const std::string state_path = join_path(options.out_dir, "train_state.txt");

    std::optional<train::TrainState> resume;
    if (options.resume) {
        require_file(state_path, "training state");
        resume = train::parse_state(io::read_file(state_path));
    }
    const auto result = train::train(doc.tmpl, ds, plan, options.train, std::move(resume), {},
                                     options.stop_after_epoch);

    const auto& cfg = options.train;
    Provenance prov{"train", cfg.seed, {}, {}};
    prov.add_input("circuit", options.circuit);
    prov.add_input("prepared", options.prepared);
    prov.add_setting("epochs", std::to_string(cfg.epochs));
    prov.add_setting("learning_rate", io::format_double(cfg.learning_rate));
    prov.add_setting("batch_size", std::to_string(cfg.batch_size));
    prov.add_setting("loss", train::to_string(cfg.loss_kind.value_or(train::default_loss(plan))));
    prov.add_setting("gradient", train::to_string(cfg.gradient_mode));
    prov.add_setting("validation_fraction", io::format_double(cfg.validation_fraction));

    const std::string block = comment_block(prov);
    io::write_file(state_path, block + train::write_state(result.state));
    std::string history = block + "epoch\ttrain_loss\tval_acc\tval_auc\n";
    for (const auto& r : result.state.history) {
        history += std::to_string(r.epoch) + "\t" + fmt(r.train_loss) + "\t" + fmt(r.val_acc) + "\t" + fmt(r.val_auc) + "\n";
    }
    io::write_file(join_path(options.out_dir, "history.tsv"), history);

    TrainSummary summary;
    summary.epochs_completed = result.state.next_epoch;
    summary.best_epoch = result.state.best_epoch;
    summary.best_score = result.state.best_score;
    summary.final_loss = result.state.history.empty() ? 0.0 : result.state.history.back().train_loss;
    summary.checkpoint_path = join_path(options.out_dir, "checkpoint.qc");
    circuit::save_circuit({doc.tmpl, result.best, prov.lines()}, summary.checkpoint_path);
    return summary;
}

std::vector<std::size_t> select_test_indices(const data::PreparedDataset& dataset, std::size_t max_test,
                                             std::uint64_t seed) {
    std::vector<std::size_t> idx = dataset.indices_of(data::Split::Test);
    if (max_test == 0 || idx.size() <= max_test) return idx;
    Rng rng(derive_seed(seed, "max-test", 0));
    shuffle(idx, rng);
    idx.resize(max_test);
    std::sort(idx.begin(), idx.end());
    return idx;
}

namespace {

struct InferenceContext {
    circuit::CircuitDocument doc;
    data::PreparedDataset ds;
    train::MeasurementPlan plan;
    std::vector<std::size_t> test_idx;
    noise::NoiseModel base_noise;
    Provenance prov;
};

InferenceContext load_inference(const InferOptions& options, const std::string& stage) {
    require_file(options.checkpoint, "checkpoint");
    require_file(options.prepared, "prepared dataset");
    if (options.shots == 0) fail(ErrorKind::Config, "shots must be >= 1");
    if (options.workers == 0) fail(ErrorKind::Config, "workers must be >= 1");
    InferenceContext ctx;
    ctx.prov = {stage, options.seed, {}, {}};
    ctx.prov.add_input("checkpoint", options.checkpoint);
    ctx.prov.add_input("prepared", options.prepared);
    const auto device = device_from(options.device, ctx.prov);
    ctx.doc = circuit::load_circuit(options.checkpoint);
    if (!ctx.doc.params) fail(ErrorKind::Config, "checkpoint " + options.checkpoint + " has no PARAMS section");
    ctx.ds = data::load_prepared(options.prepared);
    if (ctx.ds.n_features() != ctx.doc.tmpl.n_embed()) {
        fail(ErrorKind::Config, "prepared dataset has " + std::to_string(ctx.ds.n_features()) +
                                    " features, checkpoint embeds " + std::to_string(ctx.doc.tmpl.n_embed()));
    }
    ctx.plan = train::MeasurementPlan::for_classes(ctx.ds.n_classes, ctx.doc.tmpl.measured_qubits);
    ctx.test_idx = select_test_indices(ctx.ds, options.max_test, options.seed);
    if (ctx.test_idx.empty()) fail(ErrorKind::Config, "prepared dataset has no test samples");
    const auto report = circuit::validate_against_device(ctx.doc.tmpl, device);
    if (!report.ok()) fail(ErrorKind::Validation, "checkpoint does not fit the device: " + report.to_string());
    ctx.base_noise = noise::NoiseModel::from_device(device, ctx.doc.tmpl.layout);
    ctx.prov.add_setting("shots", std::to_string(options.shots));
    ctx.prov.add_setting("n_test", std::to_string(ctx.test_idx.size()));
    return ctx;
}

metrics::EvaluationReport run_inference(const InferenceContext& ctx, const InferOptions& options,
                                        const MitigationFlags& flags) {
    noise::NoiseModel noise = ctx.base_noise;
    noise.dd_enabled = flags.dd;
    noise.twirling_enabled = flags.twirl;
    const int k = static_cast<int>(ctx.plan.n_measured());

    mitigation::ReadoutCalibration cal;
    if (flags.m3) {
        const auto conf = noise::calibrate_readout(noise, options.calibration_shots,
                                                   derive_seed(options.seed, "calibration", 0));
        for (int q : ctx.plan.measured_qubits) cal.qubits.push_back(conf[static_cast<std::size_t>(q)]);
    }

    const std::size_t n = ctx.test_idx.size();
    metrics::Matrix expectations(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    const auto work = [&]() {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                const std::size_t s = ctx.test_idx[i];
                const auto gates = circuit::bind(ctx.doc.tmpl, ctx.ds.features[s], *ctx.doc.params);
                const auto counts = noise::noisy_sample(ctx.doc.tmpl.n_qubits, gates, ctx.plan.measured_qubits,
                                                        options.shots, noise, derive_seed(options.seed, "infer", s));
                expectations[i] = flags.m3 ? mitigation::expectations_from_quasi(
                                                 mitigation::mitigate(counts, cal, options.m3_tol, options.m3_max_iter), k)
                                           : mitigation::expectations_from_counts(counts, k);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(options.workers, n));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::vector<int> labels;
    for (std::size_t s : ctx.test_idx) labels.push_back(ctx.ds.labels[s]);
    metrics::EvaluationReport report;
    try {
        report = metrics::evaluate(expectations, labels, ctx.plan, options.averaging);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Validation) throw;
        // AUC is undefined when the evaluated samples miss a class.
        train::MeasurementPlan plan = ctx.plan;
        report.n_samples = labels.size();
        report.acc = metrics::accuracy(expectations, labels, plan);
        report.auc = std::numeric_limits<double>::quiet_NaN();
        report.per_class_total.assign(static_cast<std::size_t>(plan.n_classes), 0);
        report.per_class_correct.assign(static_cast<std::size_t>(plan.n_classes), 0);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            ++report.per_class_total[static_cast<std::size_t>(labels[i])];
            if (train::predict_class(expectations[i], plan) == labels[i]) {
                ++report.per_class_correct[static_cast<std::size_t>(labels[i])];
            }
        }
    }
    for (const auto& [name, fp] : ctx.prov.inputs) report.fingerprint[name] = fp;
    report.fingerprint["noise"] = std::string("dd=") + (flags.dd ? "on" : "off") + " twirl=" + (flags.twirl ? "on" : "off");
    report.fingerprint["mitigation"] = flags.m3 ? "m3" : "none";
    report.fingerprint["seed"] = std::to_string(options.seed);
    report.fingerprint["shots"] = std::to_string(options.shots);
    return report;
}

json report_json(const metrics::EvaluationReport& r) {
    json j;
    j["acc"] = r.acc;
    j["auc"] = number_or_null(r.auc);
    j["n_samples"] = r.n_samples;
    j["per_class_total"] = r.per_class_total;
    j["per_class_correct"] = r.per_class_correct;
    json fp = json::object();
    for (const auto& [k, v] : r.fingerprint) fp[k] = v;
    j["fingerprint"] = fp;
    return j;
}

std::string report_line(const std::string& name, const metrics::EvaluationReport& r) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-14s %8.4f %8s %6zu\n", name.c_str(), r.acc, fixed4(r.auc).c_str(),
                  r.n_samples);
    return line;
}

}  // namespace

metrics::EvaluationReport cmd_infer(const InferOptions& options) {
    InferenceContext ctx = load_inference(options, "infer");
    ctx.prov.add_setting("mitigation", options.flags.to_string());
    const auto report = run_inference(ctx, options, options.flags);
    json j;
    j["kind"] = "evaluation";
    j["provenance"] = provenance_json(ctx.prov);
    j["report"] = report_json(report);
    io::write_file(join_path(options.out_dir, "infer_report.json"), j.dump(2) + "\n");
    return report;
}

std::vector<AblationRow> cmd_ablate(const InferOptions& options) {
    InferenceContext ctx = load_inference(options, "ablate");
    const std::vector<std::pair<std::string, MitigationFlags>> configs = {
        {"none", {false, false, false}},
        {"DD+Twirl", {true, true, false}},
        {"M3", {false, false, true}},
        {"DD+Twirl+M3", {true, true, true}},
    };
    std::vector<AblationRow> rows;
    for (const auto& [name, flags] : configs) rows.push_back({name, flags, run_inference(ctx, options, flags)});

    std::string text = comment_block(ctx.prov);
    char head[160];
    std::snprintf(head, sizeof(head), "%-14s %8s %8s %6s\n", "config", "acc", "auc", "n");
    text += head;
    json j;
    j["kind"] = "ablation";
    j["provenance"] = provenance_json(ctx.prov);
    json table = json::array();
    for (const auto& r : rows) {
        text += report_line(r.name, r.report);
        table.push_back({{"config", r.name}, {"flags", r.flags.to_string()}, {"report", report_json(r.report)}});
    }
    j["rows"] = table;
    io::write_file(join_path(options.out_dir, "ablation.txt"), text);
    io::write_file(join_path(options.out_dir, "ablation.json"), j.dump(2) + "\n");
    return rows;
}

std::string cmd_report(const std::string& path) {
    require_file(path, "report");
    json j;
    try {
        j = json::parse(io::read_file(path));
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, path + ": not a JSON report (" + e.what() + ")");
    }
    if (!j.contains("kind") || !j.contains("provenance")) fail(ErrorKind::Parse, path + ": missing 'kind' or 'provenance'");
    std::ostringstream out;
    const auto& p = j["provenance"];
    out << "stage " << p.value("stage", "?") << "  seed " << p.value("seed", 0ULL) << "  version "
        << p.value("version", "?") << "\n";
    for (const auto& [k, v] : p["inputs"].items()) out << "input " << k << " " << v.get<std::string>() << "\n";
    const auto auc_text = [](const json& v) { return v.is_null() ? std::string("-") : fixed4(v.get<double>()); };
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "evaluation") {
        const auto& r = j["report"];
        out << "acc " << std::fixed << std::setprecision(4) << r["acc"].get<double>() << "  auc " << auc_text(r["auc"])
            << "  n " << r["n_samples"].get<std::size_t>() << "\n";
    } else if (kind == "ablation") {
        for (const auto& row : j["rows"]) {
            out << std::left << std::setw(14) << row["config"].get<std::string>() << " acc " << std::fixed
                << std::setprecision(4) << row["report"]["acc"].get<double>() << "  auc " << auc_text(row["report"]["auc"])
                << "\n";
        }
    } else if (kind == "search") {
        out << "candidates " << j["ledger"].size() << "  survivors " << j["survivors"].get<std::size_t>() << "\n";
        std::size_t shown = 0;
        for (const auto& row : j["ledger"]) {
            if (row["excluded"].get<bool>() || shown == 10) break;
            out << "id " << row["id"].get<std::uint64_t>() << "  f_score " << std::fixed << std::setprecision(6)
                << row["f_score"].get<double>() << "  cnr " << row["cnr"].get<double>() << "  repcap "
                << row["repcap"].get<double>() << "\n";
            ++shown;
        }
    } else {
        fail(ErrorKind::Parse, path + ": unknown report kind '" + kind + "'");
    }
    return out.str();
}

mitigation::QuasiDistribution cmd_mitigate(const std::string& counts_path, const std::string& calibration_path,
                                           const std::string& output, double tol, std::size_t max_iter) {
    require_file(counts_path, "counts file");
    require_file(calibration_path, "calibration file");
    const auto counts = mitigation::parse_counts(io::read_file(counts_path));
    const auto cal = mitigation::load_calibration(calibration_path);
    const auto q = mitigation::mitigate(counts, cal, tol, max_iter);
    Provenance prov{"mitigate", 0, {}, {}};
    prov.add_input("counts", counts_path);
    prov.add_input("calibration", calibration_path);
    io::write_file(output, comment_block(prov) + mitigation::write_quasi(q));
    return q;
}

void cmd_synth(data::SynthKind kind, int n_per_class, int n_test_per_class, int side, std::uint64_t seed,
               const std::string& output) {
    data::save_qds(data::synth_dataset(kind, n_per_class, side, seed, n_test_per_class), output);
}

void cmd_device(const std::string& output) { circuit::save_device(circuit::bundled_device(), output); }

}  // namespace vqc::pipeline
