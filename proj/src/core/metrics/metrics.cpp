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

#include "core/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/error.hpp"

namespace vqc::metrics {

namespace {

bool correct(std::span<const double> e, int label, const train::MeasurementPlan& plan) {
    if (plan.kind == train::TaskKind::Binary) {
        const double y = 1.0 - 2.0 * label;
        return std::abs(e[0] - y) < 1.0;
    }
    return train::predict_class(e, plan) == label;
}

}  // namespace

double accuracy(const Matrix& expectations, const std::vector<int>& labels, const train::MeasurementPlan& plan) {
    if (expectations.size() != labels.size()) fail(ErrorKind::Validation, "accuracy: predictions and labels differ in length");
    if (labels.empty()) fail(ErrorKind::Validation, "accuracy of an empty set");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) hits += correct(expectations[i], labels[i], plan) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(labels.size());
}

double auc_binary(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) fail(ErrorKind::Validation, "auc: scores and labels differ in length");
    if (!std::all_of(scores.begin(), scores.end(), [](double v) { return std::isfinite(v); })) {
        fail(ErrorKind::Numerical, "auc: non-finite score");
    }
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    // Sum of mid-ranks of positives; tied groups share their average rank.
    double positive_rank_sum = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] > 0) {
                positive_rank_sum += mid_rank;
                ++n_pos;
            }
        }
        i = j;
    }
    const std::size_t n_neg = scores.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) fail(ErrorKind::Validation, "AUC is undefined for single-class input");
    const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
    return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

std::vector<double> softmax(std::span<const double> scores) {
    const double peak = *std::max_element(scores.begin(), scores.end());
    std::vector<double> out(scores.size());
    double total = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = std::exp(scores[i] - peak);
        total += out[i];
    }
    for (double& v : out) v /= total;
    return out;
}

double auc_multiclass(const Matrix& scores, const std::vector<int>& labels, int n_classes, Averaging averaging) {
    if (scores.size() != labels.size()) fail(ErrorKind::Validation, "auc: scores and labels differ in length");
    std::vector<std::size_t> support(static_cast<std::size_t>(n_classes), 0);
    for (int l : labels) {
        if (l < 0 || l >= n_classes) fail(ErrorKind::Validation, "auc: label outside class range");
        ++support[static_cast<std::size_t>(l)];
    }
    for (int c = 0; c < n_classes; ++c) {
        if (support[static_cast<std::size_t>(c)] == 0) {
            fail(ErrorKind::Validation, "AUC is undefined: class " + std::to_string(c) + " has no samples");
        }
    }
    Matrix probs;
    probs.reserve(scores.size());
    for (const auto& row : scores) {
        if (row.size() != static_cast<std::size_t>(n_classes)) fail(ErrorKind::Validation, "auc: score row width != n_classes");
        probs.push_back(softmax(row));
    }
    double total = 0.0;
    std::vector<double> column(scores.size());
    std::vector<int> one_vs_rest(scores.size());
    for (int c = 0; c < n_classes; ++c) {
        for (std::size_t i = 0; i < scores.size(); ++i) {
            column[i] = probs[i][static_cast<std::size_t>(c)];
            one_vs_rest[i] = labels[i] == c ? 1 : -1;
        }
        const double auc = auc_binary(column, one_vs_rest);
        total += averaging == Averaging::Macro
                     ? auc
                     : auc * static_cast<double>(support[static_cast<std::size_t>(c)]) / static_cast<double>(labels.size());
    }
    return averaging == Averaging::Macro ? total / n_classes : total;
}

EvaluationReport evaluate(const Matrix& expectations, const std::vector<int>& labels, const train::MeasurementPlan& plan,
                          Averaging averaging) {
    EvaluationReport r;
    r.n_samples = labels.size();
    r.acc = accuracy(expectations, labels, plan);
    r.per_class_total.assign(static_cast<std::size_t>(plan.n_classes), 0);
    r.per_class_correct.assign(static_cast<std::size_t>(plan.n_classes), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        ++r.per_class_total[c];
        if (correct(expectations[i], labels[i], plan)) ++r.per_class_correct[c];
    }
    if (plan.kind == train::TaskKind::Binary) {
        std::vector<double> scores;
        std::vector<int> y;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            scores.push_back(expectations[i][0]);
            y.push_back(labels[i] == 0 ? 1 : -1);
        }
        r.auc = auc_binary(scores, y);
    } else {
        Matrix scores;
        for (const auto& e : expectations) scores.push_back(train::class_scores(e, plan));
        r.auc = auc_multiclass(scores, labels, plan.n_classes, averaging);
    }
    return r;
}

}  // namespace vqc::metrics
