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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "core/error.hpp"
#include "core/io.hpp"
#include "core/rng.hpp"

namespace vqc::circuit {

namespace {

void check_slot(const RotationSlot& s, int n_qubits, const char* part, std::size_t i) {
    if (s.qubit < 0 || s.qubit >= n_qubits) {
        fail(ErrorKind::Index, std::string(part) + " slot " + std::to_string(i) + " uses qubit " +
                                   std::to_string(s.qubit) + " outside the register");
    }
    if (!sim::is_rotation(s.axis)) {
        fail(ErrorKind::Validation, std::string(part) + " slot " + std::to_string(i) + " is not a rotation");
    }
}

int device_qubit(const CircuitTemplate& t, int local) {
    return t.layout.empty() ? local : t.layout[static_cast<std::size_t>(local)];
}

}  // namespace

void CircuitTemplate::validate() const {
    if (n_qubits < 1 || n_qubits > sim::kMaxQubits) {
        fail(ErrorKind::Config, "template n_qubits must be in 1..=12");
    }
    if (!layout.empty()) {
        if (layout.size() != static_cast<std::size_t>(n_qubits)) {
            fail(ErrorKind::Validation, "layout must list one device qubit per local qubit");
        }
        for (std::size_t i = 0; i < layout.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (layout[i] == layout[j]) fail(ErrorKind::Validation, "layout repeats a device qubit");
            }
        }
    }
    for (std::size_t i = 0; i < embedding_slots.size(); ++i) check_slot(embedding_slots[i], n_qubits, "embedding", i);
    for (std::size_t i = 0; i < variational_slots.size(); ++i) check_slot(variational_slots[i], n_qubits, "variational", i);
    for (const Entangler& e : entanglers) {
        if (e.position < 0 || static_cast<std::size_t>(e.position) > variational_slots.size()) {
            fail(ErrorKind::Validation, "entangler position " + std::to_string(e.position) + " outside the stream");
        }
        if (e.control < 0 || e.target < 0 || e.control >= n_qubits || e.target >= n_qubits) {
            fail(ErrorKind::Index, "entangler qubit outside the register");
        }
        if (e.control == e.target) fail(ErrorKind::Validation, "entangler control equals target");
    }
    if (!std::is_sorted(entanglers.begin(), entanglers.end(),
                        [](const Entangler& a, const Entangler& b) { return a.position < b.position; })) {
        fail(ErrorKind::Validation, "entanglers must be ordered by stream position");
    }
    sim::check_measured(measured_qubits, n_qubits);
}

FeatureVector FeatureVector::make(std::vector<double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0 && values[i] <= std::numbers::pi)) {
            fail(ErrorKind::Validation, "feature " + std::to_string(i) + " = " + io::format_double(values[i]) +
                                            " outside [0, pi]");
        }
    }
    return FeatureVector(std::move(values));
}

std::vector<GateOp> bind(const CircuitTemplate& tmpl, const std::vector<double>& features,
                         const std::vector<double>& params) {
    if (features.size() != tmpl.n_embed()) {
        fail(ErrorKind::Validation, "expected " + std::to_string(tmpl.n_embed()) + " features, got " +
                                        std::to_string(features.size()));
    }
    if (params.size() != tmpl.n_params()) {
        fail(ErrorKind::Validation, "expected " + std::to_string(tmpl.n_params()) + " parameters, got " +
                                        std::to_string(params.size()));
    }
    std::vector<GateOp> stream;
    stream.reserve(tmpl.gate_count());
    for (std::size_t i = 0; i < features.size(); ++i) {
        const RotationSlot& s = tmpl.embedding_slots[i];
        stream.push_back(GateOp::rotation(s.axis, s.qubit, features[i]));
    }
    auto ent = tmpl.entanglers.begin();
    for (std::size_t k = 0; k <= params.size(); ++k) {
        while (ent != tmpl.entanglers.end() && static_cast<std::size_t>(ent->position) == k) {
            stream.push_back(GateOp::cnot(ent->control, ent->target));
            ++ent;
        }
        if (k < params.size()) {
            const RotationSlot& s = tmpl.variational_slots[k];
            stream.push_back(GateOp::rotation(s.axis, s.qubit, params[k]));
        }
    }
    return stream;
}

std::vector<GateOp> bind(const CircuitTemplate& tmpl, const FeatureVector& features,
                         const ParameterVector& params) {
    return circuit::bind(tmpl, features.values(), params.values);
}

std::vector<std::size_t> variational_stream_indices(const CircuitTemplate& tmpl) {
    std::vector<std::size_t> out;
    out.reserve(tmpl.n_params());
    std::size_t pos = tmpl.n_embed();
    auto ent = tmpl.entanglers.begin();
    for (std::size_t k = 0; k < tmpl.n_params(); ++k) {
        while (ent != tmpl.entanglers.end() && static_cast<std::size_t>(ent->position) == k) {
            ++pos;
            ++ent;
        }
        out.push_back(pos++);
    }
    return out;
}

std::vector<GateOp> clifford_replica(const CircuitTemplate& tmpl, std::uint64_t seed) {
    Rng rng(derive_seed(seed, "clifford", tmpl.id));
    constexpr double quarter = std::numbers::pi / 2.0;
    std::vector<double> features(tmpl.n_embed());
    std::vector<double> params(tmpl.n_params());
    for (double& a : features) a = quarter * static_cast<double>(rng.below(4));
    for (double& a : params) a = quarter * static_cast<double>(rng.below(4));
    return circuit::bind(tmpl, features, params);
}

std::string ValidationReport::to_string() const {
    if (ok()) return "ok";
    std::string out;
    for (const Violation& v : violations) out += v.what + "\n";
    return out;
}

ValidationReport validate_against_device(const CircuitTemplate& tmpl, const DeviceDescription& device) {
    ValidationReport report;
    auto in_range = [&](int local) {
        if (local < 0 || local >= tmpl.n_qubits) return false;
        if (!tmpl.layout.empty() && tmpl.layout.size() != static_cast<std::size_t>(tmpl.n_qubits)) return false;
        const int q = device_qubit(tmpl, local);
        return q >= 0 && q < device.n_qubits;
    };
    for (int local = 0; local < tmpl.n_qubits; ++local) {
        if (!in_range(local)) {
            report.violations.push_back({"local qubit " + std::to_string(local) +
                                             " does not map to a device qubit (device has " +
                                             std::to_string(device.n_qubits) + ")",
                                         std::nullopt});
        }
    }
    for (const Entangler& e : tmpl.entanglers) {
        if (!in_range(e.control) || !in_range(e.target)) {
            report.violations.push_back({"entangler (" + std::to_string(e.control) + "," +
                                             std::to_string(e.target) + ") references a qubit outside the device",
                                         e});
            continue;
        }
        const int a = device_qubit(tmpl, e.control);
        const int b = device_qubit(tmpl, e.target);
        if (!device.has_edge(a, b)) {
            report.violations.push_back({"entangler (" + std::to_string(e.control) + "," +
                                             std::to_string(e.target) + ") at position " +
                                             std::to_string(e.position) + " maps to device pair (" +
                                             std::to_string(a) + "," + std::to_string(b) +
                                             ") which is not a coupling edge",
                                         e});
        }
    }
    return report;
}

std::size_t circuit_depth(const CircuitTemplate& tmpl) {
    const auto stream = circuit::bind(tmpl, std::vector<double>(tmpl.n_embed(), 0.0),
                             std::vector<double>(tmpl.n_params(), 0.0));
    std::vector<std::size_t> level(static_cast<std::size_t>(tmpl.n_qubits), 0);
    std::size_t depth = 0;
    for (const GateOp& g : stream) {
        std::size_t l = level[static_cast<std::size_t>(g.target)];
        if (g.kind == GateKind::CNOT) l = std::max(l, level[static_cast<std::size_t>(g.control)]);
        ++l;
        level[static_cast<std::size_t>(g.target)] = l;
        if (g.kind == GateKind::CNOT) level[static_cast<std::size_t>(g.control)] = l;
        depth = std::max(depth, l);
    }
    return depth;
}

// ---------------------------------------------------------------------------
// QCIRCUIT v1 documents

namespace {

constexpr const char* kCircuitHeader = "QCIRCUIT v1";

void write_slots(std::ostringstream& out, const char* name, const std::vector<RotationSlot>& slots) {
    out << name << " " << slots.size() << "\n";
    for (const RotationSlot& s : slots) out << s.qubit << " " << sim::gate_name(s.axis) << "\n";
}

class DocParser {
  public:
    explicit DocParser(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) lines_.push_back(line);
    }

    CircuitDocument parse() {
        CircuitDocument doc;
        if (lines_.empty() || io::trim(lines_[0]) != kCircuitHeader) {
            fail(ErrorKind::Parse, "circuit document line 1: expected header '" + std::string(kCircuitHeader) + "'");
        }
        next_ = 1;
        while (next_ < lines_.size()) {
            const std::string_view t = io::trim(lines_[next_]);
            if (t.size() >= 1 && t.front() == '#') {
                std::string_view body = t.substr(1);
                if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
                doc.header_comments.emplace_back(body);
                ++next_;
            } else if (t.empty()) {
                ++next_;
            } else {
                break;
            }
        }
        CircuitTemplate& t = doc.tmpl;
        t.id = static_cast<std::uint64_t>(scalar("ID"));
        t.n_qubits = static_cast<int>(scalar("QUBITS"));
        const auto layout = count_section("DEVICE");
        for (long long i = 0; i < layout; ++i) {
            const auto tok = row("DEVICE", 1);
            t.layout.push_back(static_cast<int>(integer(tok[0], "layout")));
        }
        read_slots("EMBED", t.embedding_slots);
        read_slots("VAR", t.variational_slots);
        const auto n_ent = count_section("ENTANGLE");
        for (long long i = 0; i < n_ent; ++i) {
            const auto tok = row("ENTANGLE", 3);
            t.entanglers.push_back({static_cast<int>(integer(tok[0], "position")),
                                    static_cast<int>(integer(tok[1], "control")),
                                    static_cast<int>(integer(tok[2], "target"))});
        }
        const auto n_meas = count_section("MEASURE");
        for (long long i = 0; i < n_meas; ++i) {
            const auto tok = row("MEASURE", 1);
            t.measured_qubits.push_back(static_cast<int>(integer(tok[0], "measured qubit")));
        }
        std::vector<std::string> tok;
        if (!peek(tok)) fail(ErrorKind::Parse, "circuit document: missing section END (file truncated)");
        if (tok[0] == "PARAMS") {
            const auto n = count_section("PARAMS");
            ParameterVector p;
            for (long long i = 0; i < n; ++i) {
                const auto r = row("PARAMS", 1);
                double v = 0.0;
                if (!io::parse_double(r[0], v)) {
                    fail(ErrorKind::Parse, where() + "PARAMS field " + std::to_string(i) +
                                               " is not a finite number: '" + r[0] + "'");
                }
                p.values.push_back(v);
            }
            doc.params = std::move(p);
        }
        if (!peek(tok)) fail(ErrorKind::Parse, "circuit document: missing section END (file truncated)");
        if (tok.size() != 1 || tok[0] != "END") fail(ErrorKind::Parse, where() + "expected END, got '" + tok[0] + "'");
        ++next_;
        try {
            t.validate();
        } catch (const Error& e) {
            fail(ErrorKind::Parse, std::string("circuit document: ") + e.what());
        }
        if (doc.params && doc.params->values.size() != t.n_params()) {
            fail(ErrorKind::Parse, "circuit document: PARAMS count does not match VAR count");
        }
        return doc;
    }

  private:
    std::string where() const { return "circuit document line " + std::to_string(line_no_) + ": "; }

    // Skips blank/comment lines; leaves next_ pointing at the found line.
    bool peek(std::vector<std::string>& tok) {
        while (next_ < lines_.size()) {
            const std::string_view t = io::trim(lines_[next_]);
            if (!t.empty() && t.front() != '#') {
                tok = io::split_ws(t);
                line_no_ = next_ + 1;
                return true;
            }
            ++next_;
        }
        return false;
    }

    long long integer(const std::string& s, const std::string& field) {
        long long v = 0;
        if (!io::parse_int(s, v)) fail(ErrorKind::Parse, where() + "field '" + field + "' is not an integer: '" + s + "'");
        return v;
    }

    long long scalar(const std::string& key) {
        std::vector<std::string> tok;
        if (!peek(tok)) fail(ErrorKind::Parse, "circuit document: missing section " + key + " (file truncated)");
        if (tok[0] != key) fail(ErrorKind::Parse, where() + "expected section " + key + ", got '" + tok[0] + "'");
        if (tok.size() != 2) fail(ErrorKind::Parse, where() + key + " takes one value");
        ++next_;
        return integer(tok[1], key);
    }

    long long count_section(const std::string& key) {
        const long long n = scalar(key);
        if (n < 0) fail(ErrorKind::Parse, where() + key + " count is negative");
        return n;
    }

    std::vector<std::string> row(const std::string& section, std::size_t width) {
        std::vector<std::string> tok;
        if (!peek(tok)) fail(ErrorKind::Parse, "circuit document: section " + section + " truncated");
        if (tok.size() != width) {
            fail(ErrorKind::Parse, where() + section + " rows have " + std::to_string(width) + " field(s)");
        }
        ++next_;
        return tok;
    }

    void read_slots(const std::string& section, std::vector<RotationSlot>& out) {
        const auto n = count_section(section);
        for (long long i = 0; i < n; ++i) {
            const auto tok = row(section, 2);
            const auto kind = sim::parse_gate_name(tok[1]);
            if (!kind || !sim::is_rotation(*kind)) {
                fail(ErrorKind::Parse, where() + section + " axis must be RX, RY or RZ, got '" + tok[1] + "'");
            }
            out.push_back({static_cast<int>(integer(tok[0], "qubit")), *kind});
        }
    }

    std::vector<std::string> lines_;
    std::size_t next_ = 0;
    std::size_t line_no_ = 0;
};

}  // namespace

std::string serialize(const CircuitDocument& doc) {
    const CircuitTemplate& t = doc.tmpl;
    std::ostringstream out;
    out << kCircuitHeader << "\n";
    for (const std::string& c : doc.header_comments) out << "# " << c << "\n";
    out << "ID " << t.id << "\n";
    out << "QUBITS " << t.n_qubits << "\n";
    out << "DEVICE " << t.layout.size() << "\n";
    for (int q : t.layout) out << q << "\n";
    write_slots(out, "EMBED", t.embedding_slots);
    write_slots(out, "VAR", t.variational_slots);
    out << "ENTANGLE " << t.entanglers.size() << "\n";
    for (const Entangler& e : t.entanglers) out << e.position << " " << e.control << " " << e.target << "\n";
    out << "MEASURE " << t.measured_qubits.size() << "\n";
    for (int q : t.measured_qubits) out << q << "\n";
    if (doc.params) {
        out << "PARAMS " << doc.params->values.size() << "\n";
        for (double v : doc.params->values) out << io::format_double(v) << "\n";
    }
    out << "END\n";
    return out.str();
}

CircuitDocument deserialize(const std::string& text) { return DocParser(text).parse(); }

CircuitDocument load_circuit(const std::string& path) { return deserialize(io::read_file(path)); }

void save_circuit(const CircuitDocument& doc, const std::string& path) { io::write_file(path, serialize(doc)); }

}  // namespace vqc::circuit
