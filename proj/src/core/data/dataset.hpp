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
#include <string>
#include <vector>

#include "core/circuit/circuit.hpp"

namespace vqc::data {

enum class Split : std::uint8_t { Train = 0, Test = 1, Validation = 2 };

/// 8-bit images with labels. Pixels are stored row-major, channels innermost.
struct RawDataset {
    int height = 0;
    int width = 0;
    int channels = 1;
    int n_classes = 0;
    std::vector<std::vector<std::uint8_t>> images;
    std::vector<int> labels;
    std::vector<Split> splits;

    std::size_t size() const noexcept { return labels.size(); }
    void validate() const;

    friend bool operator==(const RawDataset&, const RawDataset&) = default;
};

/// Pooled, [0, pi]-normalized features. Every feature vector is built through
/// `FeatureVector::make`, so the range invariant holds by construction.
struct PreparedDataset {
    int n_classes = 0;
    int side = 0;
    int source_height = 0;
    int source_width = 0;
    std::vector<circuit::FeatureVector> features;
    std::vector<int> labels;
    std::vector<Split> splits;
    std::string provenance;  // free text stored in an optional "META" trailer

    std::size_t size() const noexcept { return labels.size(); }
    std::size_t n_features() const noexcept { return features.empty() ? 0 : features.front().size(); }
    void validate() const;

    PreparedDataset subset(const std::vector<std::size_t>& indices) const;
    std::vector<std::size_t> indices_of(Split split) const;

    friend bool operator==(const PreparedDataset&, const PreparedDataset&) = default;
};

enum class Format { QdsBinary, Csv };

/// QDS-binary: "QDS1", little-endian u32 n_samples, height, width, channels,
/// n_classes, then per sample: label byte, pixel bytes, split byte.
std::string encode_qds(const RawDataset& ds);
RawDataset decode_qds(const std::string& bytes);
void save_qds(const RawDataset& ds, const std::string& path);

/// CSV rows are square grayscale pixels followed by the label; an optional
/// header row is detected by non-numeric cells, and a trailing "split" column
/// (train/test/validation or 0/1/2) is honored when the header names it.
/// `n_classes` of 0 infers max(label) + 1.
RawDataset parse_csv(const std::string& text, int n_classes = 0);

RawDataset load(const std::string& path, Format format, int n_classes = 0);

/// Channel-mean grayscale of sample `index`, row-major height x width.
std::vector<double> grayscale(const RawDataset& ds, std::size_t index);

/// Window means over an out_side x out_side grid. Window boundaries along an
/// axis of length n sit at floor(i * n / out_side), so non-divisible sizes
/// get windows of floor/ceil(n / out_side) pixels.
std::vector<double> average_pool(const std::vector<double>& image, int height, int width, int out_side);

/// v -> v / 255 * pi, row-major flatten.
circuit::FeatureVector normalize(const std::vector<double>& pooled);

PreparedDataset prepare(const RawDataset& raw, int out_side);

/// Prepared-feature container: "QDF1", little-endian u32 n_samples, side,
/// side, channels (=1), n_classes, source_height, source_width, then per
/// sample: label byte, side*side float32 features, split byte.
std::string encode_prepared(const PreparedDataset& ds);
PreparedDataset decode_prepared(const std::string& bytes);
void save_prepared(const PreparedDataset& ds, const std::string& path);
PreparedDataset load_prepared(const std::string& path);

enum class SynthKind { TwoBlob, FourCorner, Ring };

/// Deterministic synthetic images. `n_per_class` training and
/// `n_test_per_class` test samples per class.
RawDataset synth_dataset(SynthKind kind, int n_per_class, int side, std::uint64_t seed,
                         int n_test_per_class = 0);

/// First `per_class` indices of each class under a seeded shuffle, grouped by
/// class. Throws a validation error naming the first short class.
std::vector<std::size_t> stratified_indices(const std::vector<int>& labels, int n_classes,
                                            std::size_t per_class, std::uint64_t seed);

}  // namespace vqc::data
