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

#include "core/circuit/device.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/error.hpp"
#include "core/io.hpp"

namespace vqc::circuit {

void check_confusion(const Confusion& c, int qubit) {
    for (int t = 0; t < 2; ++t) {
        if (c[0][t] < 0.0 || c[1][t] < 0.0) {
            fail(ErrorKind::Validation, "readout matrix of qubit " + std::to_string(qubit) +
                                            " has a negative entry");
        }
        if (std::abs(c[0][t] + c[1][t] - 1.0) > 1e-9) {
            fail(ErrorKind::Validation, "readout matrix of qubit " + std::to_string(qubit) +
                                            " column " + std::to_string(t) + " does not sum to 1");
        }
    }
}

bool DeviceDescription::has_edge(int a, int b) const noexcept {
    return std::any_of(coupling_edges.begin(), coupling_edges.end(), [&](const Edge& e) {
        return (e.a == a && e.b == b) || (e.a == b && e.b == a);
    });
}

std::vector<std::vector<int>> DeviceDescription::adjacency() const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_qubits));
    for (const Edge& e : coupling_edges) {
        adj[static_cast<std::size_t>(e.a)].push_back(e.b);
        adj[static_cast<std::size_t>(e.b)].push_back(e.a);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return adj;
}

double DeviceDescription::readout_error(int qubit) const {
    const Confusion& c = readout_confusion.at(static_cast<std::size_t>(qubit));
    return 0.5 * (c[1][0] + c[0][1]);
}

void DeviceDescription::validate() const {
    if (n_qubits < 1) fail(ErrorKind::Validation, "device must have at least one qubit");
    for (const Edge& e : coupling_edges) {
        if (e.a == e.b) fail(ErrorKind::Validation, "coupling edge " + std::to_string(e.a) + " is a self-loop");
        if (e.a < 0 || e.b < 0 || e.a >= n_qubits || e.b >= n_qubits) {
            fail(ErrorKind::Validation, "coupling edge " + std::to_string(e.a) + "-" +
                                            std::to_string(e.b) + " references a missing qubit");
        }
    }
    if (readout_confusion.size() != static_cast<std::size_t>(n_qubits)) {
        fail(ErrorKind::Validation, "device needs one readout matrix per qubit");
    }
    for (int q = 0; q < n_qubits; ++q) check_confusion(readout_confusion[static_cast<std::size_t>(q)], q);
    for (double p : {p_dep_1q, p_dep_2q, p_idle}) {
        if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::Validation, "gate error rates must lie in [0, 1]");
    }
    if (!std::isfinite(epsilon_coherent)) fail(ErrorKind::Validation, "epsilon_coherent must be finite");
}

DeviceDescription bundled_device() {
    DeviceDescription d;
    d.n_qubits = 16;
    // Two 7-qubit rows joined by bridge qubits 7 and 8; the ring
    // 2-3-4-5-6-8-15-14-13-12-11-7 is one heavy hexagon.
    const int edges[][2] = {{0, 1},  {1, 2},   {2, 3},   {3, 4},   {4, 5},   {5, 6},
                            {2, 7},  {7, 11},  {6, 8},   {8, 15},  {9, 10},  {10, 11},
                            {11, 12}, {12, 13}, {13, 14}, {14, 15}};
    for (const auto& e : edges) d.coupling_edges.push_back({e[0], e[1]});
    for (int q = 0; q < d.n_qubits; ++q) {
        const double r = 0.01 + 0.02 * static_cast<double>((q * 5) % 16) / 15.0;
        d.readout_confusion.push_back(flip_confusion(0.8 * r, 1.2 * r));
    }
    d.p_dep_1q = 0.001;
    d.p_dep_2q = 0.01;
    d.p_idle = 0.002;
    d.epsilon_coherent = 0.02;
    return d;
}

std::string write_device(const DeviceDescription& d) {
    std::ostringstream out;
    out << "# vqc device v1\n";
    out << "QUBITS " << d.n_qubits << "\n";
    out << "EDGES " << d.coupling_edges.size() << "\n";
    for (const Edge& e : d.coupling_edges) out << e.a << " " << e.b << "\n";
    out << "READOUT " << d.readout_confusion.size() << "\n";
    for (std::size_t q = 0; q < d.readout_confusion.size(); ++q) {
        const Confusion& c = d.readout_confusion[q];
        out << q << " " << io::format_double(c[0][0]) << " " << io::format_double(c[0][1]) << " "
            << io::format_double(c[1][0]) << " " << io::format_double(c[1][1]) << "\n";
    }
    out << "GATE_ERRORS\n";
    out << "p_dep_1q " << io::format_double(d.p_dep_1q) << "\n";
    out << "p_dep_2q " << io::format_double(d.p_dep_2q) << "\n";
    out << "p_idle " << io::format_double(d.p_idle) << "\n";
    out << "epsilon_coherent " << io::format_double(d.epsilon_coherent) << "\n";
    return out.str();
}

namespace {

struct LineReader {
    std::vector<std::string> lines;
    std::size_t next = 0;

    explicit LineReader(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) lines.push_back(line);
    }

    // Next non-blank, non-comment line; false at end of input.
    bool fetch(std::vector<std::string>& tokens, std::size_t& line_no) {
        while (next < lines.size()) {
            const std::string_view t = io::trim(lines[next]);
            ++next;
            if (t.empty() || t.front() == '#') continue;
            tokens = io::split_ws(t);
            line_no = next;
            return true;
        }
        return false;
    }
};

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
    fail(ErrorKind::Parse, "device file line " + std::to_string(line) + ": " + msg);
}

double number(const std::string& tok, std::size_t line, const std::string& field) {
    double v = 0.0;
    if (!io::parse_double(tok, v)) parse_fail(line, "field '" + field + "' is not a finite number: '" + tok + "'");
    return v;
}

long long integer(const std::string& tok, std::size_t line, const std::string& field) {
    long long v = 0;
    if (!io::parse_int(tok, v)) parse_fail(line, "field '" + field + "' is not an integer: '" + tok + "'");
    return v;
}

}  // namespace

DeviceDescription parse_device(const std::string& text) {
    LineReader reader(text);
    DeviceDescription d;
    std::vector<std::string> tok;
    std::size_t line = 0;
    bool seen_qubits = false, seen_edges = false, seen_readout = false, seen_errors = false;

    while (reader.fetch(tok, line)) {
        const std::string& section = tok[0];
        if (section == "QUBITS") {
            if (tok.size() != 2) parse_fail(line, "QUBITS takes one value");
            d.n_qubits = static_cast<int>(integer(tok[1], line, "QUBITS"));
            seen_qubits = true;
        } else if (section == "EDGES") {
            if (tok.size() != 2) parse_fail(line, "EDGES takes a count");
            const long long n = integer(tok[1], line, "EDGES");
            for (long long i = 0; i < n; ++i) {
                if (!reader.fetch(tok, line)) parse_fail(line, "EDGES section truncated");
                if (tok.size() != 2) parse_fail(line, "edge rows are 'a b'");
                d.coupling_edges.push_back({static_cast<int>(integer(tok[0], line, "edge")),
                                            static_cast<int>(integer(tok[1], line, "edge"))});
            }
            seen_edges = true;
        } else if (section == "READOUT") {
            if (tok.size() != 2) parse_fail(line, "READOUT takes a count");
            const long long n = integer(tok[1], line, "READOUT");
            d.readout_confusion.assign(static_cast<std::size_t>(std::max(0LL, n)), identity_confusion());
            for (long long i = 0; i < n; ++i) {
                if (!reader.fetch(tok, line)) parse_fail(line, "READOUT section truncated");
                if (tok.size() != 5) parse_fail(line, "readout rows are 'qubit a00 a01 a10 a11'");
                const long long q = integer(tok[0], line, "qubit");
                if (q < 0 || q >= n) parse_fail(line, "readout qubit out of range");
                Confusion& c = d.readout_confusion[static_cast<std::size_t>(q)];
                c[0][0] = number(tok[1], line, "a00");
                c[0][1] = number(tok[2], line, "a01");
                c[1][0] = number(tok[3], line, "a10");
                c[1][1] = number(tok[4], line, "a11");
            }
            seen_readout = true;
        } else if (section == "GATE_ERRORS") {
            const char* keys[] = {"p_dep_1q", "p_dep_2q", "p_idle", "epsilon_coherent"};
            double* fields[] = {&d.p_dep_1q, &d.p_dep_2q, &d.p_idle, &d.epsilon_coherent};
            for (int i = 0; i < 4; ++i) {
                if (!reader.fetch(tok, line)) parse_fail(line, "GATE_ERRORS section truncated");
                if (tok.size() != 2 || tok[0] != keys[i]) {
                    parse_fail(line, std::string("expected '") + keys[i] + " <value>'");
                }
                *fields[i] = number(tok[1], line, keys[i]);
            }
            seen_errors = true;
        } else {
            parse_fail(line, "unknown section '" + section + "'");
        }
    }
    if (!seen_qubits) fail(ErrorKind::Parse, "device file: missing section QUBITS");
    if (!seen_edges) fail(ErrorKind::Parse, "device file: missing section EDGES");
    if (!seen_readout) fail(ErrorKind::Parse, "device file: missing section READOUT");
    if (!seen_errors) fail(ErrorKind::Parse, "device file: missing section GATE_ERRORS");
    d.validate();
    return d;
}

DeviceDescription load_device(const std::string& path) { return parse_device(io::read_file(path)); }

void save_device(const DeviceDescription& device, const std::string& path) {
    io::write_file(path, write_device(device));
}

}  // namespace vqc::circuit
