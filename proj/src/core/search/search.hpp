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
#include <vector>

#include "core/circuit/circuit.hpp"
#include "core/data/dataset.hpp"
#include "core/noise/noise_model.hpp"

namespace vqc::search {

struct SearchConfig {
    std::size_t n_candidates = 250;
    std::size_t m_replicas = 32;
    std::uint64_t replica_shots = 10000;
    double cnr_threshold = 0.7;
    double alpha_cnr = 0.5;
    std::size_t d_c = 16;
    std::size_t repcap_param_draws = 8;
    std::uint64_t seed = 0;

    void validate() const;
};

struct ScoredCircuit {
    circuit::CircuitTemplate tmpl;
    double cnr = 0.0;
    std::optional<double> repcap;   // unset for excluded candidates
    std::optional<double> f_score;  // cnr^alpha * repcap
    bool passed_threshold = false;
    std::size_t depth = 0;
};

struct SearchResult {
    /// Survivors by descending f_score, then excluded candidates by id.
    std::vector<ScoredCircuit> ledger;
    std::optional<circuit::CircuitTemplate> best;  // empty: no survivor

    std::size_t survivors() const noexcept;
};

/// Connected device subgraph of `n_qubits` qubits with the lowest mean
/// readout error (ties: lexicographically smallest sorted qubit set).
std::vector<int> select_subgraph(const circuit::DeviceDescription& device, int n_qubits);

/// Candidates with ids 0..n-1, measuring every local qubit.
std::vector<circuit::CircuitTemplate> generate_candidates(const SearchConfig& config,
                                                          const circuit::DeviceDescription& device,
                                                          int n_qubits, std::size_t n_embed,
                                                          std::size_t n_params);

/// Half the L1 distance. Missing keys count as zero; inputs must each sum to
/// 1 within 1e-6.
double tvd(const sim::CountsDistribution& p, const sim::CountsDistribution& q);

/// Mean of 1 - TVD(noiseless, noisy) over M Clifford replicas, measured on
/// the template's measured qubits.
double cnr(const circuit::CircuitTemplate& tmpl, const noise::NoiseModel& noise, const SearchConfig& config);

/// Mean fidelity matrix R_C over d_c samples per class and
/// `repcap_param_draws` random parameter vectors, rows grouped by class.
std::vector<std::vector<double>> representation_matrix(const circuit::CircuitTemplate& tmpl,
                                                       const data::PreparedDataset& dataset,
                                                       const SearchConfig& config,
                                                       std::vector<int>* row_labels = nullptr);

/// 1 - ||R_C - R_ref||_F^2 / (2 n_c d_c^2) for a given similarity matrix.
double repcap_from_matrix(const std::vector<std::vector<double>>& similarity, const std::vector<int>& row_labels,
                          int n_classes, std::size_t d_c);

double repcap(const circuit::CircuitTemplate& tmpl, const data::PreparedDataset& dataset, const SearchConfig& config);

double composite_score(double cnr_value, double repcap_value, double alpha);

SearchResult score_and_select(const std::vector<circuit::CircuitTemplate>& candidates,
                              const noise::NoiseModel& noise, const data::PreparedDataset& dataset,
                              const SearchConfig& config);

/// Ranking step alone, for ledgers whose scores are already filled in.
void rank(std::vector<ScoredCircuit>& ledger);

std::string report_text(const SearchResult& result, const SearchConfig& config);

}  // namespace vqc::search
