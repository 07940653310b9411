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

#include "core/data/dataset.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "gtest/gtest.h"
#include "test_support.hpp"

using namespace vqc;
using namespace vqc::data;

namespace {

const double kPi = std::numbers::pi;

std::string csv_row(const std::vector<int>& pixels, int label) {
    std::ostringstream s;
    for (int p : pixels) s << p << ',';
    s << label << '\n';
    return s.str();
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorKind::Config;
}

}  // namespace

TEST(data, qds_round_trip) {
    const auto ds = synth_dataset(SynthKind::TwoBlob, 5, 8, 3);
    ASSERT_EQ(ds.size(), 10u);
    const auto path = std::filesystem::path(testing_support::temp_dir("data_rt")) / "set.qds";
    save_qds(ds, path.string());
    EXPECT_EQ(load(path.string(), Format::QdsBinary), ds);
    EXPECT_EQ(decode_qds(encode_qds(ds)), ds);
}

TEST(data, qds_layout) {
    RawDataset ds;
    ds.height = ds.width = 1;
    ds.n_classes = 2;
    ds.images = {{7}, {9}};
    ds.labels = {1, 0};
    ds.splits = {Split::Train, Split::Test};
    const auto bytes = encode_qds(ds);
    const std::string expected = std::string("QDS1") + std::string("\x02\0\0\0\x01\0\0\0\x01\0\0\0\x01\0\0\0\x02\0\0\0", 20) +
                                 std::string("\x01\x07\x00\x00\x09\x01", 6);
    EXPECT_EQ(bytes, expected);
}

TEST(data, qds_errors) {
    const auto bytes = encode_qds(synth_dataset(SynthKind::TwoBlob, 2, 4, 1));
    EXPECT_EQ(kind_of([&] { decode_qds("QDS2" + bytes.substr(4)); }), ErrorKind::Io);
    EXPECT_EQ(kind_of([&] { decode_qds(bytes.substr(0, bytes.size() - 3)); }), ErrorKind::Io);
    EXPECT_EQ(kind_of([] { load("/nonexistent/file.qds", Format::QdsBinary); }), ErrorKind::Io);
}

TEST(data, csv_one_sample) {
    std::vector<int> pixels(49);
    for (int i = 0; i < 49; ++i) pixels[static_cast<std::size_t>(i)] = i * 5;
    const auto ds = parse_csv(csv_row(pixels, 1), 2);
    ASSERT_EQ(ds.size(), 1u);
    EXPECT_EQ(ds.height, 7);
    EXPECT_EQ(ds.labels[0], 1);
    EXPECT_EQ(ds.images[0][48], 240);
}

TEST(data, csv_label_bound) {
    std::vector<int> pixels(49, 0);
    EXPECT_EQ(kind_of([&] { parse_csv(csv_row(pixels, 9), 9); }), ErrorKind::Io);
    EXPECT_NO_THROW(parse_csv(csv_row(pixels, 8), 9));
}

TEST(data, csv_header_and_split) {
    const std::string text = "p0,p1,p2,p3,label,split\n1,2,3,4,0,train\n5,6,7,8,1,test\n";
    const auto ds = parse_csv(text);
    ASSERT_EQ(ds.size(), 2u);
    EXPECT_EQ(ds.splits[1], Split::Test);
    EXPECT_EQ(ds.n_classes, 2);
    EXPECT_EQ(kind_of([] { parse_csv("1,2,3,0\n"); }), ErrorKind::Io);
    EXPECT_EQ(kind_of([] { parse_csv("1,2,3,300,0\n"); }), ErrorKind::Io);
}

TEST(data, pooling_examples) {
    const auto constant = average_pool(std::vector<double>(224 * 224, 100.0), 224, 224, 7);
    ASSERT_EQ(constant.size(), 49u);
    for (double v : constant) EXPECT_DOUBLE_EQ(v, 100.0);

    std::vector<double> block(16, 0.0);
    block[0] = block[1] = block[4] = block[5] = 4.0;
    EXPECT_EQ(average_pool(block, 4, 4, 2), (std::vector<double>{4, 0, 0, 0}));

    std::vector<double> checker(28 * 28);
    for (int r = 0; r < 28; ++r)
        for (int c = 0; c < 28; ++c) checker[static_cast<std::size_t>(r * 28 + c)] = ((r + c) % 2) ? 255.0 : 0.0;
    for (double v : average_pool(checker, 28, 28, 7)) EXPECT_DOUBLE_EQ(v, 127.5);
}

TEST(data, adaptive_pooling_partitions_evenly) {
    // 28 -> 8: windows of 3 or 4 pixels; a ramp along columns lands each cell at its window mean.
    std::vector<double> ramp(28 * 28);
    for (int r = 0; r < 28; ++r)
        for (int c = 0; c < 28; ++c) ramp[static_cast<std::size_t>(r * 28 + c)] = c;
    const auto pooled = average_pool(ramp, 28, 28, 8);
    ASSERT_EQ(pooled.size(), 64u);
    double prev = -1.0;
    for (int c = 0; c < 8; ++c) {
        EXPECT_GT(pooled[static_cast<std::size_t>(c)], prev);
        prev = pooled[static_cast<std::size_t>(c)];
    }
    // Each cell of a column ramp is start + (w - 1) / 2; recover the partition from it.
    int start = 0;
    for (int c = 0; c < 8; ++c) {
        const double w = 2.0 * (pooled[static_cast<std::size_t>(c)] - start) + 1.0;
        EXPECT_TRUE(w == 3.0 || w == 4.0) << "cell " << c << " width " << w;
        start += static_cast<int>(w);
    }
    EXPECT_EQ(start, 28);
}

TEST(data, normalize_examples) {
    const auto f = normalize({0.0, 255.0, 127.5});
    EXPECT_EQ(f.values()[0], 0.0);
    EXPECT_NEAR(f.values()[1], kPi, 1e-15);
    EXPECT_NEAR(f.values()[2], kPi / 2.0, 1e-15);
}

TEST(data, prepare_lengths_and_range) {
    for (auto kind : {SynthKind::TwoBlob, SynthKind::FourCorner, SynthKind::Ring}) {
        const auto raw = synth_dataset(kind, 10, 28, 5, 4);
        for (int side : {7, 8}) {
            const auto p = prepare(raw, side);
            ASSERT_EQ(p.size(), raw.size());
            for (const auto& f : p.features) {
                ASSERT_EQ(f.size(), static_cast<std::size_t>(side * side));
                for (double v : f.values()) {
                    EXPECT_GE(v, 0.0);
                    EXPECT_LE(v, kPi);
                }
            }
            EXPECT_EQ(p.source_height, 28);
        }
    }
}

TEST(data, pooling_monotone_in_intensity) {
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a(28 * 28), b(28 * 28);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = static_cast<double>(rng.below(200));
            b[i] = a[i] + static_cast<double>(rng.below(56));
        }
        const auto fa = normalize(average_pool(a, 28, 28, 7)), fb = normalize(average_pool(b, 28, 28, 7));
        for (std::size_t i = 0; i < fa.size(); ++i) EXPECT_LE(fa.values()[i], fb.values()[i]);
    }
}

TEST(data, prepared_round_trip) {
    auto p = prepare(synth_dataset(SynthKind::FourCorner, 4, 28, 2, 2), 7);
    p.provenance = "tool vqc 0.1.0\nseed 2\n";
    // Features are stored as float32.
    for (auto& f : p.features) {
        auto v = f.values();
        for (auto& x : v) x = static_cast<float>(x);
        f = circuit::FeatureVector::make(v);
    }
    EXPECT_EQ(decode_prepared(encode_prepared(p)), p);
    const auto path = std::filesystem::path(testing_support::temp_dir("data_prep")) / "set.qdf";
    save_prepared(p, path.string());
    EXPECT_EQ(load_prepared(path.string()), p);
    const auto sub = p.subset({1, 3});
    EXPECT_EQ(sub.size(), 2u);
    EXPECT_EQ(sub.labels[1], p.labels[3]);
    EXPECT_EQ(sub.provenance, p.provenance);
}

TEST(data, feature_range_enforced) {
    PreparedDataset p;
    p.n_classes = 2;
    p.side = 1;
    p.features = {circuit::FeatureVector::make({1.0})};
    p.labels = {2};
    p.splits = {Split::Train};
    EXPECT_THROW(p.validate(), Error);
}

TEST(data, synth_counts_and_determinism) {
    const auto a = synth_dataset(SynthKind::TwoBlob, 100, 28, 7);
    EXPECT_EQ(a.size(), 200u);
    EXPECT_EQ(a.n_classes, 2);
    EXPECT_EQ(encode_qds(a), encode_qds(synth_dataset(SynthKind::TwoBlob, 100, 28, 7)));
    EXPECT_NE(encode_qds(a), encode_qds(synth_dataset(SynthKind::TwoBlob, 100, 28, 8)));
    EXPECT_EQ(synth_dataset(SynthKind::FourCorner, 3, 28, 7).n_classes, 4);
    const auto with_test = synth_dataset(SynthKind::Ring, 10, 28, 7, 5);
    EXPECT_EQ(with_test.n_classes, 3);
    EXPECT_EQ(with_test.size(), 45u);
    std::size_t n_test = 0;
    for (auto s : with_test.splits) n_test += s == Split::Test;
    EXPECT_EQ(n_test, 15u);
}

TEST(data, two_blob_class_means_separate) {
    const auto p = prepare(synth_dataset(SynthKind::TwoBlob, 100, 28, 11), 7);
    std::vector<double> m0(49, 0.0), m1(49, 0.0);
    double n0 = 0, n1 = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto& m = p.labels[i] == 0 ? m0 : m1;
        (p.labels[i] == 0 ? n0 : n1) += 1;
        for (std::size_t k = 0; k < 49; ++k) m[k] += p.features[i].values()[k];
    }
    int separated = 0;
    for (std::size_t k = 0; k < 49; ++k) separated += std::abs(m0[k] / n0 - m1[k] / n1) >= 0.5;
    EXPECT_GE(separated, 10);
}

TEST(data, stratified_balance) {
    Rng rng(3);
    std::vector<int> labels(500);
    for (auto& l : labels) l = static_cast<int>(rng.below(4));
    const auto idx = stratified_indices(labels, 4, 16, 99);
    ASSERT_EQ(idx.size(), 64u);
    std::vector<int> per(4, 0);
    for (auto i : idx) ++per[static_cast<std::size_t>(labels[i])];
    EXPECT_EQ(per, (std::vector<int>{16, 16, 16, 16}));
    EXPECT_EQ(idx, stratified_indices(labels, 4, 16, 99));
    const std::vector<int> scarce{0, 0, 1};
    EXPECT_THROW(stratified_indices(scarce, 2, 2, 1), Error);
}
