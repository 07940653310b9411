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

#include "core/search/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <unordered_set>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace vqc::search {

using circuit::CircuitTemplate;
using sim::GateKind;

void SearchConfig::validate() const {
    if (n_candidates < 1 || m_replicas < 1 || replica_shots < 1 || d_c < 1 || repcap_param_draws < 1) {
        fail(ErrorKind::Config, "search counts must all be >= 1");
    }
    if (!(cnr_threshold >= 0.0 && cnr_threshold <= 1.0)) fail(ErrorKind::Config, "cnr_threshold must lie in [0, 1]");
    if (!std::isfinite(alpha_cnr)) fail(ErrorKind::Config, "alpha_cnr must be finite");
}

std::size_t SearchResult::survivors() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(ledger.begin(), ledger.end(), [](const ScoredCircuit& s) { return s.passed_threshold; }));
}

std::vector<int> select_subgraph(const circuit::DeviceDescription& device, int n_qubits) {
    if (n_qubits < 1 || n_qubits > device.n_qubits) {
        fail(ErrorKind::Config, "cannot place " + std::to_string(n_qubits) + " qubits on a " +
                                    std::to_string(device.n_qubits) + "-qubit device");
    }
    if (device.n_qubits > 64) fail(ErrorKind::Config, "subgraph search supports devices up to 64 qubits");
    const auto adj = device.adjacency();
    std::vector<std::uint64_t> neighbours(static_cast<std::size_t>(device.n_qubits), 0);
    for (int q = 0; q < device.n_qubits; ++q) {
        for (int r : adj[static_cast<std::size_t>(q)]) neighbours[static_cast<std::size_t>(q)] |= std::uint64_t{1} << r;
    }
    std::vector<std::uint64_t> level;
    for (int q = 0; q < device.n_qubits; ++q) level.push_back(std::uint64_t{1} << q);
    for (int size = 1; size < n_qubits; ++size) {
        std::unordered_set<std::uint64_t> grown;
        for (std::uint64_t set : level) {
            std::uint64_t frontier = 0;
            for (int q = 0; q < device.n_qubits; ++q) {
                if ((set >> q) & 1U) frontier |= neighbours[static_cast<std::size_t>(q)];
            }
            frontier &= ~set;
            for (int q = 0; q < device.n_qubits; ++q) {
                if ((frontier >> q) & 1U) grown.insert(set | (std::uint64_t{1} << q));
            }
        }
        level.assign(grown.begin(), grown.end());
        if (level.empty()) break;
    }
    if (level.empty()) {
        fail(ErrorKind::Config, "device has no connected subgraph of " + std::to_string(n_qubits) + " qubits");
    }
    std::vector<int> best;
    double best_error = 0.0;
    for (std::uint64_t set : level) {
        std::vector<int> qubits;
        double error = 0.0;
        for (int q = 0; q < device.n_qubits; ++q) {
            if ((set >> q) & 1U) {
                qubits.push_back(q);
                error += device.readout_error(q);
            }
        }
        error /= static_cast<double>(n_qubits);
        if (best.empty() || error < best_error || (error == best_error && qubits < best)) {
            best = std::move(qubits);
            best_error = error;
        }
    }
    return best;
}

std::vector<CircuitTemplate> generate_candidates(const SearchConfig& config, const circuit::DeviceDescription& device,
                                                 int n_qubits, std::size_t n_embed, std::size_t n_params) {
    config.validate();
    device.validate();
    const std::vector<int> layout = select_subgraph(device, n_qubits);
    std::vector<std::pair<int, int>> local_edges;
    for (int i = 0; i < n_qubits; ++i) {
        for (int j = i + 1; j < n_qubits; ++j) {
            if (device.has_edge(layout[static_cast<std::size_t>(i)], layout[static_cast<std::size_t>(j)])) {
                local_edges.emplace_back(i, j);
            }
        }
    }
    constexpr GateKind axes[] = {GateKind::RX, GateKind::RY, GateKind::RZ};
    const auto nq = static_cast<std::uint64_t>(n_qubits);

    std::vector<CircuitTemplate> out;
    out.reserve(config.n_candidates);
    for (std::size_t c = 0; c < config.n_candidates; ++c) {
        Rng rng(derive_seed(config.seed, "generate", c));
        CircuitTemplate t;
        t.id = c;
        t.n_qubits = n_qubits;
        t.layout = layout;
        const std::size_t full_rounds = (n_embed / static_cast<std::size_t>(n_qubits)) * static_cast<std::size_t>(n_qubits);
        for (std::size_t i = 0; i < n_embed; ++i) {
            const int q = i < full_rounds ? static_cast<int>(i % nq) : static_cast<int>(rng.below(nq));
            t.embedding_slots.push_back({q, axes[rng.below(3)]});
        }
        for (std::size_t i = 0; i < n_params; ++i) {
            const int q = static_cast<int>(rng.below(nq));
            t.variational_slots.push_back({q, axes[rng.below(3)]});
        }
        if (!local_edges.empty()) {
            const std::uint64_t lo = nq - 1, hi = 2 * nq;
            const std::uint64_t count = lo + rng.below(hi - lo + 1);
            for (std::uint64_t k = 0; k < count; ++k) {
                const auto& [a, b] = local_edges[rng.below(local_edges.size())];
                const bool flip = rng.below(2) == 1;
                const int position = static_cast<int>(rng.below(n_params + 1));
                t.entanglers.push_back({position, flip ? b : a, flip ? a : b});
            }
            std::stable_sort(t.entanglers.begin(), t.entanglers.end(),
                             [](const circuit::Entangler& x, const circuit::Entangler& y) { return x.position < y.position; });
        }
        for (int q = 0; q < n_qubits; ++q) t.measured_qubits.push_back(q);
        out.push_back(std::move(t));
    }
    return out;
}

double tvd(const sim::CountsDistribution& p, const sim::CountsDistribution& q) {
    if (p.n_measured != q.n_measured) fail(ErrorKind::Validation, "tvd over different measured-qubit spaces");
    for (const auto* d : {&p, &q}) {
        if (std::abs(d->total_weight() - 1.0) > 1e-6) {
            fail(ErrorKind::Validation, "tvd input is not normalized (sum " + std::to_string(d->total_weight()) + ")");
        }
    }
    double total = 0.0;
    auto ip = p.entries.begin();
    auto iq = q.entries.begin();
    while (ip != p.entries.end() || iq != q.entries.end()) {
        if (iq == q.entries.end() || (ip != p.entries.end() && ip->first < iq->first)) {
            total += std::abs(ip->second);
            ++ip;
        } else if (ip == p.entries.end() || iq->first < ip->first) {
            total += std::abs(iq->second);
            ++iq;
        } else {
            total += std::abs(ip->second - iq->second);
            ++ip;
            ++iq;
        }
    }
    return 0.5 * total;
}

namespace {

double dense_tvd(const std::vector<double>& exact, const std::vector<std::uint64_t>& counts, std::uint64_t shots) {
    double total = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        total += std::abs(exact[i] - static_cast<double>(counts[i]) / static_cast<double>(shots));
    }
    return 0.5 * total;
}

std::uint64_t candidate_seed(const SearchConfig& config, const CircuitTemplate& tmpl) {
    return derive_seed(config.seed, "candidate", tmpl.id);
}

}  // namespace

double cnr(const CircuitTemplate& tmpl, const noise::NoiseModel& noise, const SearchConfig& config) {
    config.validate();
    const std::uint64_t base = candidate_seed(config, tmpl);
    double fidelity_sum = 0.0;
    for (std::size_t i = 0; i < config.m_replicas; ++i) {
        const std::uint64_t replica_seed = derive_seed(base, i);
        const auto gates = circuit::clifford_replica(tmpl, replica_seed);
        const auto exact = sim::marginal_probabilities(sim::run_circuit(tmpl.n_qubits, gates), tmpl.measured_qubits);
        const auto counts = noise::noisy_histogram(tmpl.n_qubits, gates, tmpl.measured_qubits, config.replica_shots,
                                                   noise, derive_seed(replica_seed, "shots", 0));
        fidelity_sum += 1.0 - dense_tvd(exact, counts, config.replica_shots);
    }
    return fidelity_sum / static_cast<double>(config.m_replicas);
}

std::vector<std::vector<double>> representation_matrix(const CircuitTemplate& tmpl, const data::PreparedDataset& dataset,
                                                       const SearchConfig& config, std::vector<int>* row_labels) {
    const auto rows = data::stratified_indices(dataset.labels, dataset.n_classes, config.d_c, config.seed);
    const std::size_t n = rows.size();
    std::vector<std::vector<double>> sim_matrix(n, std::vector<double>(n, 0.0));
    std::vector<sim::StateVector> states;
    states.reserve(n);
    for (std::size_t t = 0; t < config.repcap_param_draws; ++t) {
        Rng rng(derive_seed(config.seed, "repcap", t));
        std::vector<double> params(tmpl.n_params());
        for (double& p : params) p = 2.0 * std::numbers::pi * rng.uniform();
        states.clear();
        for (std::size_t r : rows) {
            states.push_back(sim::run_circuit(tmpl.n_qubits, circuit::bind(tmpl, dataset.features[r].values(), params)));
        }
        for (std::size_t i = 0; i < n; ++i) {
            sim_matrix[i][i] += 1.0;
            for (std::size_t j = i + 1; j < n; ++j) {
                const double f = std::norm(states[i].inner(states[j]));
                sim_matrix[i][j] += f;
                sim_matrix[j][i] += f;
            }
        }
    }
    for (auto& row : sim_matrix) {
        for (double& v : row) v /= static_cast<double>(config.repcap_param_draws);
    }
    if (row_labels) {
        row_labels->clear();
        for (std::size_t r : rows) row_labels->push_back(dataset.labels[r]);
    }
    return sim_matrix;
}

double repcap_from_matrix(const std::vector<std::vector<double>>& similarity, const std::vector<int>& row_labels,
                          int n_classes, std::size_t d_c) {
    double frob = 0.0;
    for (std::size_t i = 0; i < similarity.size(); ++i) {
        for (std::size_t j = 0; j < similarity.size(); ++j) {
            const double ref = row_labels[i] == row_labels[j] ? 1.0 : 0.0;
            const double d = similarity[i][j] - ref;
            frob += d * d;
        }
    }
    const double dc = static_cast<double>(d_c);
    return 1.0 - frob / (2.0 * static_cast<double>(n_classes) * dc * dc);
}

double repcap(const CircuitTemplate& tmpl, const data::PreparedDataset& dataset, const SearchConfig& config) {
    std::vector<int> labels;
    const auto matrix = representation_matrix(tmpl, dataset, config, &labels);
    return repcap_from_matrix(matrix, labels, dataset.n_classes, config.d_c);
}

double composite_score(double cnr_value, double repcap_value, double alpha) {
    return std::pow(cnr_value, alpha) * repcap_value;
}

void rank(std::vector<ScoredCircuit>& ledger) {
    std::stable_sort(ledger.begin(), ledger.end(), [](const ScoredCircuit& a, const ScoredCircuit& b) {
        if (a.passed_threshold != b.passed_threshold) return a.passed_threshold;
        if (a.passed_threshold) {
            if (*a.f_score != *b.f_score) return *a.f_score > *b.f_score;
            if (a.tmpl.gate_count() != b.tmpl.gate_count()) return a.tmpl.gate_count() < b.tmpl.gate_count();
        }
        return a.tmpl.id < b.tmpl.id;
    });
}

SearchResult score_and_select(const std::vector<CircuitTemplate>& candidates, const noise::NoiseModel& noise,
                              const data::PreparedDataset& dataset, const SearchConfig& config) {
    if (candidates.empty()) fail(ErrorKind::Validation, "score_and_select needs at least one candidate");
    config.validate();
    SearchResult result;
    for (const CircuitTemplate& t : candidates) {
        ScoredCircuit s;
        s.tmpl = t;
        s.depth = circuit::circuit_depth(t);
        s.cnr = cnr(t, noise, config);
        s.passed_threshold = s.cnr >= config.cnr_threshold;
        if (s.passed_threshold) {
            s.repcap = repcap(t, dataset, config);
            s.f_score = composite_score(s.cnr, *s.repcap, config.alpha_cnr);
        }
        result.ledger.push_back(std::move(s));
    }
    rank(result.ledger);
    if (!result.ledger.empty() && result.ledger.front().passed_threshold) result.best = result.ledger.front().tmpl;
    return result;
}

std::string report_text(const SearchResult& result, const SearchConfig& config) {
    std::ostringstream out;
    char line[160];
    out << "# candidates " << result.ledger.size() << " survivors " << result.survivors() << " threshold "
        << config.cnr_threshold << " alpha_cnr " << config.alpha_cnr << " seed " << config.seed << "\n";
    std::snprintf(line, sizeof(line), "%-6s %6s %6s %10s %10s %10s %s\n", "index", "gates", "depth", "cnr", "repcap",
                  "f_score", "excluded");
    out << line;
    for (const ScoredCircuit& s : result.ledger) {
        char repcap_buf[32] = "-", f_buf[32] = "-";
        if (s.repcap) std::snprintf(repcap_buf, sizeof(repcap_buf), "%.6f", *s.repcap);
        if (s.f_score) std::snprintf(f_buf, sizeof(f_buf), "%.6f", *s.f_score);
        std::snprintf(line, sizeof(line), "%-6llu %6zu %6zu %10.6f %10s %10s %s\n",
                      static_cast<unsigned long long>(s.tmpl.id), s.tmpl.gate_count(), s.depth, s.cnr, repcap_buf,
                      f_buf, s.passed_threshold ? "no" : "yes");
        out << line;
    }
    return out.str();
}

}  // namespace vqc::search
