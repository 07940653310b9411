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
#include <cstdint>
#include <sstream>

#include "core/error.hpp"
#include "core/io.hpp"

namespace vqc::mitigation {

void ReadoutCalibration::validate() const {
    for (std::size_t q = 0; q < qubits.size(); ++q) {
        try {
            circuit::check_confusion(qubits[q], static_cast<int>(q));
        } catch (const Error& e) {
            fail(ErrorKind::Calibration, e.what());
        }
    }
}

double QuasiDistribution::total_weight() const noexcept {
    double total = 0.0;
    for (const auto& [key, w] : entries) total += w;
    return total;
}

namespace {

class RestrictedConfusion {
  public:
    RestrictedConfusion(std::vector<std::uint64_t> keys, const ReadoutCalibration& cal, int n_bits)
        : keys_(std::move(keys)), cal_(cal), n_bits_(n_bits) {
        const std::size_t n = keys_.size();
        if (n <= kDenseCacheLimit) {
            dense_.resize(n * n);
            for (std::size_t s = 0; s < n; ++s) {
                for (std::size_t t = 0; t < n; ++t) dense_[s * n + t] = raw_entry(s, t);
            }
        }
        column_sum_.assign(n, 0.0);
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t t = 0; t < n; ++t) column_sum_[t] += unscaled(s, t);
        }
        for (std::size_t t = 0; t < n; ++t) {
            if (!(column_sum_[t] > 0.0)) {
                fail(ErrorKind::Calibration, "calibration assigns zero probability to observed outcome " +
                                                 sim::outcome_key(keys_[t], n_bits_));
            }
        }
    }

    std::size_t size() const noexcept { return keys_.size(); }

    double operator()(std::size_t s, std::size_t t) const { return unscaled(s, t) / column_sum_[t]; }

    void multiply(const std::vector<double>& x, std::vector<double>& out) const {
        const std::size_t n = keys_.size();
        out.assign(n, 0.0);
        for (std::size_t s = 0; s < n; ++s) {
            double acc = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                if (x[t] != 0.0) acc += (*this)(s, t) * x[t];
            }
            out[s] = acc;
        }
    }

  private:
    double raw_entry(std::size_t s, std::size_t t) const {
        double v = 1.0;
        for (int j = 0; j < n_bits_; ++j) {
            const auto& a = cal_.qubits[static_cast<std::size_t>(j)];
            v *= a[(keys_[s] >> j) & 1U][(keys_[t] >> j) & 1U];
        }
        return v;
    }
    double unscaled(std::size_t s, std::size_t t) const {
        return dense_.empty() ? raw_entry(s, t) : dense_[s * keys_.size() + t];
    }

    std::vector<std::uint64_t> keys_;
    const ReadoutCalibration& cal_;
    int n_bits_;
    std::vector<double> dense_;
    std::vector<double> column_sum_;
};

}  // namespace

QuasiDistribution mitigate(const sim::CountsDistribution& raw, const ReadoutCalibration& cal, double tol,
                           std::size_t max_iter) {
    if (raw.entries.empty()) fail(ErrorKind::Validation, "cannot mitigate an empty distribution");
    if (!(tol > 0.0)) fail(ErrorKind::Config, "mitigation tolerance must be positive");
    if (static_cast<int>(cal.size()) < raw.n_measured) {
        fail(ErrorKind::Calibration, "calibration covers " + std::to_string(cal.size()) + " qubits, counts measure " +
                                         std::to_string(raw.n_measured));
    }
    cal.validate();
    const double total = raw.total_weight();
    if (!(total > 0.0)) fail(ErrorKind::Validation, "raw distribution has no weight");

    std::vector<std::uint64_t> keys;
    std::vector<double> p;
    for (const auto& [key, w] : raw.entries) {
        if (static_cast<int>(key.size()) != raw.n_measured) {
            fail(ErrorKind::Validation, "outcome '" + key + "' does not have " + std::to_string(raw.n_measured) + " bits");
        }
        keys.push_back(sim::outcome_index(key));
        p.push_back(w / total);
    }
    const RestrictedConfusion a(keys, cal, raw.n_measured);
    std::vector<double> diag(a.size());
    for (std::size_t s = 0; s < a.size(); ++s) {
        diag[s] = a(s, s);
        if (!(diag[s] > 0.0)) {
            fail(ErrorKind::Calibration, "zero diagonal for outcome " + sim::outcome_key(keys[s], raw.n_measured));
        }
    }

    QuasiDistribution out;
    out.n_measured = raw.n_measured;
    for (double v : p) out.raw_total += v;
    std::vector<double> x(a.size(), 0.0), ax;
    for (;;) {
        a.multiply(x, ax);
        double residual = 0.0;
        for (std::size_t s = 0; s < x.size(); ++s) residual += std::abs(p[s] - ax[s]);
        out.residual = residual;
        if (residual < tol) break;
        if (out.iterations == max_iter) {
            fail(ErrorKind::Convergence, "mitigation did not converge in " + std::to_string(max_iter) +
                                             " iterations (residual " + io::format_double(residual) + ")");
        }
        for (std::size_t s = 0; s < x.size(); ++s) x[s] += (p[s] - ax[s]) / diag[s];
        ++out.iterations;
    }
    for (std::size_t s = 0; s < x.size(); ++s) out.entries.emplace(sim::outcome_key(keys[s], raw.n_measured), x[s]);
    return out;
}

namespace {

std::vector<double> expectations_from_entries(const std::map<std::string, double>& entries, int n_measured) {
    double total = 0.0;
    std::vector<double> diff(static_cast<std::size_t>(n_measured), 0.0);
    for (const auto& [key, w] : entries) {
        if (static_cast<int>(key.size()) != n_measured) {
            fail(ErrorKind::Validation, "outcome '" + key + "' does not have " + std::to_string(n_measured) + " bits");
        }
        total += w;
        for (int j = 0; j < n_measured; ++j) {
            const char bit = key[key.size() - 1 - static_cast<std::size_t>(j)];
            diff[static_cast<std::size_t>(j)] += bit == '0' ? w : -w;
        }
    }
    if (std::abs(total) < 1e-9) fail(ErrorKind::Validation, "degenerate distribution: total weight is zero");
    for (double& d : diff) d /= total;
    return diff;
}

}  // namespace

std::vector<double> expectations_from_quasi(const QuasiDistribution& q, int n_measured) {
    return expectations_from_entries(q.entries, n_measured);
}

std::vector<double> expectations_from_counts(const sim::CountsDistribution& counts, int n_measured) {
    return expectations_from_entries(counts.entries, n_measured);
}

ReadoutCalibration parse_calibration(const std::string& text) {
    ReadoutCalibration cal;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = io::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto fields = io::split_ws(t);
        circuit::Confusion c{};
        if (fields.size() != 4 || !io::parse_double(fields[0], c[0][0]) || !io::parse_double(fields[1], c[0][1]) ||
            !io::parse_double(fields[2], c[1][0]) || !io::parse_double(fields[3], c[1][1])) {
            fail(ErrorKind::Parse, "calibration line " + std::to_string(line_no) + ": expected 'a00 a01 a10 a11'");
        }
        cal.qubits.push_back(c);
    }
    if (cal.qubits.empty()) fail(ErrorKind::Parse, "calibration file has no rows");
    cal.validate();
    return cal;
}

std::string write_calibration(const ReadoutCalibration& cal) {
    std::ostringstream out;
    out << "# a00 a01 a10 a11 per measured qubit, entry [observed][true]\n";
    for (const auto& c : cal.qubits) {
        out << io::format_double(c[0][0]) << " " << io::format_double(c[0][1]) << " " << io::format_double(c[1][0])
            << " " << io::format_double(c[1][1]) << "\n";
    }
    return out.str();
}

ReadoutCalibration load_calibration(const std::string& path) { return parse_calibration(io::read_file(path)); }

sim::CountsDistribution parse_counts(const std::string& text) {
    sim::CountsDistribution d;
    d.n_measured = -1;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    double total = 0.0;
    bool integral = true;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = io::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto fields = io::split_ws(t);
        const std::string where = "counts line " + std::to_string(line_no);
        double w = 0.0;
        if (fields.size() != 2 || !io::parse_double(fields[1], w)) fail(ErrorKind::Parse, where + ": expected 'bitstring weight'");
        const std::string& key = fields[0];
        if (key.find_first_not_of("01") != std::string::npos || key.empty()) {
            fail(ErrorKind::Parse, where + ": '" + key + "' is not a bitstring");
        }
        if (d.n_measured >= 0 && static_cast<int>(key.size()) != d.n_measured) {
            fail(ErrorKind::Parse, where + ": bitstring length differs from earlier lines");
        }
        if (w < 0.0) fail(ErrorKind::Parse, where + ": negative count");
        if (!d.entries.emplace(key, w).second) fail(ErrorKind::Parse, where + ": duplicate bitstring " + key);
        d.n_measured = static_cast<int>(key.size());
        total += w;
        integral = integral && w == std::floor(w);
    }
    if (d.entries.empty()) fail(ErrorKind::Parse, "counts file has no entries");
    d.total_shots = integral ? static_cast<std::uint64_t>(total) : 0;
    return d;
}

std::string write_counts(const sim::CountsDistribution& counts) {
    std::ostringstream out;
    out << "# shots " << counts.total_shots << "\n";
    for (const auto& [key, w] : counts.entries) out << key << " " << io::format_double(w) << "\n";
    return out.str();
}

std::string write_quasi(const QuasiDistribution& q) {
    std::ostringstream out;
    out << "# raw_total " << io::format_double(q.raw_total) << "\n";
    out << "# iterations " << q.iterations << "\n";
    out << "# residual " << io::format_double(q.residual) << "\n";
    for (const auto& [key, w] : q.entries) out << key << " " << io::format_double(w) << "\n";
    return out.str();
}

}  // namespace vqc::mitigation
