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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>

#include "core/error.hpp"
#include "core/io.hpp"
#include "core/rng.hpp"

namespace vqc::data {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFU));
}

void put_f32(std::string& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

class ByteReader {
  public:
    ByteReader(const std::string& bytes, const char* what) : bytes_(bytes), what_(what) {}

    void need(std::size_t n, const std::string& field) const {
        if (pos_ + n > bytes_.size()) {
            fail(ErrorKind::Io, std::string(what_) + " truncated while reading " + field + " at byte " +
                                    std::to_string(pos_));
        }
    }
    std::uint8_t u8(const std::string& field) {
        need(1, field);
        return static_cast<std::uint8_t>(bytes_[pos_++]);
    }
    std::uint32_t u32(const std::string& field) {
        need(4, field);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes_[pos_++])) << (8 * i);
        return v;
    }
    float f32(const std::string& field) { return std::bit_cast<float>(u32(field)); }
    void bytes(std::uint8_t* dst, std::size_t n, const std::string& field) {
        need(n, field);
        std::memcpy(dst, bytes_.data() + pos_, n);
        pos_ += n;
    }
    std::string text(std::size_t n, const std::string& field) {
        need(n, field);
        std::string t = bytes_.substr(pos_, n);
        pos_ += n;
        return t;
    }
    std::string magic() {
        need(4, "magic");
        std::string m = bytes_.substr(pos_, 4);
        pos_ += 4;
        return m;
    }
    bool at_end() const noexcept { return pos_ == bytes_.size(); }

  private:
    const std::string& bytes_;
    const char* what_;
    std::size_t pos_ = 0;
};

Split split_from_byte(std::uint8_t b, std::size_t sample) {
    if (b > 2) fail(ErrorKind::Io, "sample " + std::to_string(sample) + " has invalid split byte " + std::to_string(b));
    return static_cast<Split>(b);
}

void check_labels(const std::vector<int>& labels, int n_classes) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= n_classes) {
            fail(ErrorKind::Io, "sample " + std::to_string(i) + " has label " + std::to_string(labels[i]) +
                                    " but n_classes is " + std::to_string(n_classes));
        }
    }
}

}  // namespace

void RawDataset::validate() const {
    if (height < 1 || width < 1 || channels < 1) fail(ErrorKind::Validation, "image dimensions must be positive");
    if (n_classes < 1 || n_classes > 255) fail(ErrorKind::Validation, "n_classes must be in 1..=255");
    if (images.size() != labels.size() || splits.size() != labels.size()) {
        fail(ErrorKind::Validation, "images, labels and splits must have equal length");
    }
    const auto expected = static_cast<std::size_t>(height) * static_cast<std::size_t>(width) *
                          static_cast<std::size_t>(channels);
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i].size() != expected) {
            fail(ErrorKind::Validation, "sample " + std::to_string(i) + " has non-uniform image size");
        }
    }
    check_labels(labels, n_classes);
}

void PreparedDataset::validate() const {
    if (features.size() != labels.size() || splits.size() != labels.size()) {
        fail(ErrorKind::Validation, "features, labels and splits must have equal length");
    }
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (features[i].size() != static_cast<std::size_t>(side) * static_cast<std::size_t>(side)) {
            fail(ErrorKind::Validation, "sample " + std::to_string(i) + " feature length mismatch");
        }
    }
    check_labels(labels, n_classes);
}

PreparedDataset PreparedDataset::subset(const std::vector<std::size_t>& indices) const {
    PreparedDataset out;
    out.n_classes = n_classes;
    out.side = side;
    out.source_height = source_height;
    out.source_width = source_width;
    out.provenance = provenance;
    for (std::size_t i : indices) {
        out.features.push_back(features.at(i));
        out.labels.push_back(labels.at(i));
        out.splits.push_back(splits.at(i));
    }
    return out;
}

std::vector<std::size_t> PreparedDataset::indices_of(Split split) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < splits.size(); ++i) {
        if (splits[i] == split) out.push_back(i);
    }
    return out;
}

std::string encode_qds(const RawDataset& ds) {
    ds.validate();
    std::string out = "QDS1";
    put_u32(out, static_cast<std::uint32_t>(ds.size()));
    put_u32(out, static_cast<std::uint32_t>(ds.height));
    put_u32(out, static_cast<std::uint32_t>(ds.width));
    put_u32(out, static_cast<std::uint32_t>(ds.channels));
    put_u32(out, static_cast<std::uint32_t>(ds.n_classes));
    for (std::size_t i = 0; i < ds.size(); ++i) {
        out.push_back(static_cast<char>(ds.labels[i]));
        out.append(reinterpret_cast<const char*>(ds.images[i].data()), ds.images[i].size());
        out.push_back(static_cast<char>(ds.splits[i]));
    }
    return out;
}

RawDataset decode_qds(const std::string& bytes) {
    ByteReader in(bytes, "QDS file");
    if (in.magic() != "QDS1") fail(ErrorKind::Io, "QDS file: bad magic (expected 'QDS1')");
    RawDataset ds;
    const std::uint32_t n = in.u32("n_samples");
    ds.height = static_cast<int>(in.u32("height"));
    ds.width = static_cast<int>(in.u32("width"));
    ds.channels = static_cast<int>(in.u32("channels"));
    ds.n_classes = static_cast<int>(in.u32("n_classes"));
    if (ds.height < 1 || ds.width < 1 || ds.channels < 1 || ds.height > 4096 || ds.width > 4096 || ds.channels > 4) {
        fail(ErrorKind::Io, "QDS file: implausible image dimensions");
    }
    if (ds.n_classes < 1 || ds.n_classes > 255) fail(ErrorKind::Io, "QDS file: n_classes must be in 1..=255");
    const std::size_t pixels = static_cast<std::size_t>(ds.height) * static_cast<std::size_t>(ds.width) *
                               static_cast<std::size_t>(ds.channels);
    in.need(static_cast<std::size_t>(n) * (pixels + 2), "sample records");
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::string idx = "sample " + std::to_string(i);
        ds.labels.push_back(in.u8(idx + " label"));
        std::vector<std::uint8_t> img(pixels);
        in.bytes(img.data(), pixels, idx + " pixels");
        ds.images.push_back(std::move(img));
        ds.splits.push_back(split_from_byte(in.u8(idx + " split"), i));
    }
    if (!in.at_end()) fail(ErrorKind::Io, "QDS file: trailing bytes after last sample");
    check_labels(ds.labels, ds.n_classes);
    return ds;
}

void save_qds(const RawDataset& ds, const std::string& path) { io::write_file(path, encode_qds(ds)); }

RawDataset parse_csv(const std::string& text, int n_classes) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    std::size_t line_no = 0;
    bool has_split = false;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = io::trim(line);
        if (t.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = t.find(',', start);
            cells.emplace_back(io::trim(t.substr(start, comma == std::string_view::npos ? t.npos : comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (first) {
            first = false;
            long long probe = 0;
            if (!io::parse_int(cells.front(), probe)) {
                has_split = cells.back() == "split";
                continue;  // header row
            }
        }
        rows.push_back(std::move(cells));
    }
    if (rows.empty()) fail(ErrorKind::Io, "CSV has no data rows");

    const std::size_t trailing = has_split ? 2 : 1;
    if (rows.front().size() <= trailing) fail(ErrorKind::Io, "CSV rows need pixels followed by a label");
    const std::size_t n_pixels = rows.front().size() - trailing;
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_pixels))));
    if (static_cast<std::size_t>(side) * static_cast<std::size_t>(side) != n_pixels) {
        fail(ErrorKind::Io, "CSV pixel count " + std::to_string(n_pixels) + " is not a square image");
    }
    RawDataset ds;
    ds.height = ds.width = side;
    ds.channels = 1;
    int max_label = -1;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& cells = rows[r];
        if (cells.size() != n_pixels + trailing) {
            fail(ErrorKind::Io, "CSV data row " + std::to_string(r + 1) + " has " + std::to_string(cells.size()) +
                                    " cells, expected " + std::to_string(n_pixels + trailing));
        }
        std::vector<std::uint8_t> img(n_pixels);
        for (std::size_t p = 0; p < n_pixels; ++p) {
            long long v = 0;
            if (!io::parse_int(cells[p], v) || v < 0 || v > 255) {
                fail(ErrorKind::Io, "CSV data row " + std::to_string(r + 1) + " pixel " + std::to_string(p) +
                                        " is not an integer in 0..=255");
            }
            img[p] = static_cast<std::uint8_t>(v);
        }
        long long label = 0;
        if (!io::parse_int(cells[n_pixels], label) || label < 0 || label > 254) {
            fail(ErrorKind::Io, "CSV data row " + std::to_string(r + 1) + " has an invalid label");
        }
        Split split = Split::Train;
        if (has_split) {
            const std::string& s = cells[n_pixels + 1];
            if (s == "train" || s == "0") split = Split::Train;
            else if (s == "test" || s == "1") split = Split::Test;
            else if (s == "validation" || s == "val" || s == "2") split = Split::Validation;
            else fail(ErrorKind::Io, "CSV data row " + std::to_string(r + 1) + " has unknown split '" + s + "'");
        }
        max_label = std::max(max_label, static_cast<int>(label));
        ds.images.push_back(std::move(img));
        ds.labels.push_back(static_cast<int>(label));
        ds.splits.push_back(split);
    }
    ds.n_classes = n_classes > 0 ? n_classes : max_label + 1;
    check_labels(ds.labels, ds.n_classes);
    return ds;
}

RawDataset load(const std::string& path, Format format, int n_classes) {
    const std::string bytes = io::read_file(path);
    RawDataset ds = format == Format::QdsBinary ? decode_qds(bytes) : parse_csv(bytes, n_classes);
    if (format == Format::QdsBinary && n_classes > 0 && n_classes != ds.n_classes) {
        fail(ErrorKind::Io, "'" + path + "' declares " + std::to_string(ds.n_classes) + " classes, expected " +
                                std::to_string(n_classes));
    }
    return ds;
}

std::vector<double> grayscale(const RawDataset& ds, std::size_t index) {
    const auto& img = ds.images.at(index);
    const std::size_t n = static_cast<std::size_t>(ds.height) * static_cast<std::size_t>(ds.width);
    const auto c = static_cast<std::size_t>(ds.channels);
    std::vector<double> out(n);
    for (std::size_t p = 0; p < n; ++p) {
        double sum = 0.0;
        for (std::size_t k = 0; k < c; ++k) sum += img[p * c + k];
        out[p] = sum / static_cast<double>(c);
    }
    return out;
}

std::vector<double> average_pool(const std::vector<double>& image, int height, int width, int out_side) {
    if (out_side < 1) fail(ErrorKind::Validation, "pooled side must be >= 1");
    if (out_side > height || out_side > width) {
        fail(ErrorKind::Validation, "pooled side " + std::to_string(out_side) + " exceeds image size " +
                                        std::to_string(height) + "x" + std::to_string(width));
    }
    if (image.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
        fail(ErrorKind::Validation, "image buffer does not match its dimensions");
    }
    auto edge = [out_side](int n, int i) {
        return static_cast<int>(static_cast<long long>(i) * n / out_side);
    };
    std::vector<double> out(static_cast<std::size_t>(out_side) * static_cast<std::size_t>(out_side));
    for (int r = 0; r < out_side; ++r) {
        const int r0 = edge(height, r), r1 = edge(height, r + 1);
        for (int c = 0; c < out_side; ++c) {
            const int c0 = edge(width, c), c1 = edge(width, c + 1);
            double sum = 0.0;
            for (int y = r0; y < r1; ++y) {
                for (int x = c0; x < c1; ++x) sum += image[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
            }
            out[static_cast<std::size_t>(r) * static_cast<std::size_t>(out_side) + static_cast<std::size_t>(c)] =
                sum / static_cast<double>((r1 - r0) * (c1 - c0));
        }
    }
    return out;
}

circuit::FeatureVector normalize(const std::vector<double>& pooled) {
    std::vector<double> values(pooled.size());
    for (std::size_t i = 0; i < pooled.size(); ++i) {
        values[i] = std::clamp(pooled[i] / 255.0 * std::numbers::pi, 0.0, std::numbers::pi);
    }
    return circuit::FeatureVector::make(std::move(values));
}

PreparedDataset prepare(const RawDataset& raw, int out_side) {
    raw.validate();
    PreparedDataset out;
    out.n_classes = raw.n_classes;
    out.side = out_side;
    out.source_height = raw.height;
    out.source_width = raw.width;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        out.features.push_back(normalize(average_pool(grayscale(raw, i), raw.height, raw.width, out_side)));
    }
    out.labels = raw.labels;
    out.splits = raw.splits;
    return out;
}

std::string encode_prepared(const PreparedDataset& ds) {
    ds.validate();
    std::string out = "QDF1";
    put_u32(out, static_cast<std::uint32_t>(ds.size()));
    put_u32(out, static_cast<std::uint32_t>(ds.side));
    put_u32(out, static_cast<std::uint32_t>(ds.side));
    put_u32(out, 1);
    put_u32(out, static_cast<std::uint32_t>(ds.n_classes));
    put_u32(out, static_cast<std::uint32_t>(ds.source_height));
    put_u32(out, static_cast<std::uint32_t>(ds.source_width));
    for (std::size_t i = 0; i < ds.size(); ++i) {
        out.push_back(static_cast<char>(ds.labels[i]));
        for (double v : ds.features[i].values()) put_f32(out, static_cast<float>(v));
        out.push_back(static_cast<char>(ds.splits[i]));
    }
    if (!ds.provenance.empty()) {
        out += "META";
        put_u32(out, static_cast<std::uint32_t>(ds.provenance.size()));
        out += ds.provenance;
    }
    return out;
}

PreparedDataset decode_prepared(const std::string& bytes) {
    ByteReader in(bytes, "prepared-feature file");
    if (in.magic() != "QDF1") fail(ErrorKind::Io, "prepared-feature file: bad magic (expected 'QDF1')");
    PreparedDataset ds;
    const std::uint32_t n = in.u32("n_samples");
    const std::uint32_t h = in.u32("height");
    const std::uint32_t w = in.u32("width");
    const std::uint32_t c = in.u32("channels");
    if (h != w || c != 1 || h < 1 || h > 64) fail(ErrorKind::Io, "prepared-feature file: features must be a square single-channel grid");
    ds.side = static_cast<int>(h);
    ds.n_classes = static_cast<int>(in.u32("n_classes"));
    if (ds.n_classes < 1 || ds.n_classes > 255) fail(ErrorKind::Io, "prepared-feature file: invalid n_classes");
    ds.source_height = static_cast<int>(in.u32("source_height"));
    ds.source_width = static_cast<int>(in.u32("source_width"));
    const std::size_t n_feat = static_cast<std::size_t>(h) * w;
    in.need(static_cast<std::size_t>(n) * (n_feat * 4 + 2), "sample records");
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::string idx = "sample " + std::to_string(i);
        ds.labels.push_back(in.u8(idx + " label"));
        std::vector<double> values(n_feat);
        for (double& v : values) {
            // Rounding to float32 can push pi slightly above pi.
            v = std::clamp(static_cast<double>(in.f32(idx + " features")), 0.0, std::numbers::pi);
        }
        ds.features.push_back(circuit::FeatureVector::make(std::move(values)));
        ds.splits.push_back(split_from_byte(in.u8(idx + " split"), i));
    }
    if (!in.at_end()) {
        if (in.magic() != "META") fail(ErrorKind::Io, "prepared-feature file: trailing bytes after last sample");
        const std::uint32_t len = in.u32("metadata length");
        ds.provenance = in.text(len, "metadata");
        if (!in.at_end()) fail(ErrorKind::Io, "prepared-feature file: trailing bytes after metadata");
    }
    check_labels(ds.labels, ds.n_classes);
    return ds;
}

void save_prepared(const PreparedDataset& ds, const std::string& path) { io::write_file(path, encode_prepared(ds)); }

PreparedDataset load_prepared(const std::string& path) { return decode_prepared(io::read_file(path)); }

namespace {

struct BlobSpec {
    double cy, cx;
    double radius;  // 0 for a filled Gaussian blob, > 0 for a ring
};

std::vector<BlobSpec> class_shapes(SynthKind kind) {
    switch (kind) {
        case SynthKind::TwoBlob: return {{0.3, 0.3, 0.0}, {0.7, 0.7, 0.0}};
        case SynthKind::FourCorner: return {{0.25, 0.25, 0.0}, {0.25, 0.75, 0.0}, {0.75, 0.25, 0.0}, {0.75, 0.75, 0.0}};
        case SynthKind::Ring: return {{0.5, 0.5, 0.14}, {0.5, 0.5, 0.27}, {0.5, 0.5, 0.40}};
    }
    return {};
}

std::vector<std::uint8_t> synth_image(const BlobSpec& shape, int side, Rng& rng) {
    const double s = static_cast<double>(side);
    const double cy = (shape.cy + 0.06 * (rng.uniform() - 0.5)) * s;
    const double cx = (shape.cx + 0.06 * (rng.uniform() - 0.5)) * s;
    const double peak = 190.0 + 40.0 * rng.uniform();
    const double sigma = (shape.radius > 0.0 ? 0.05 : 0.16) * s;
    std::vector<std::uint8_t> img(static_cast<std::size_t>(side) * static_cast<std::size_t>(side));
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            const double dy = y + 0.5 - cy, dx = x + 0.5 - cx;
            double d = std::sqrt(dy * dy + dx * dx);
            if (shape.radius > 0.0) d = std::abs(d - shape.radius * s);
            const double v = 15.0 + 20.0 * rng.uniform() + peak * std::exp(-0.5 * d * d / (sigma * sigma));
            img[static_cast<std::size_t>(y) * static_cast<std::size_t>(side) + static_cast<std::size_t>(x)] =
                static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    }
    return img;
}

}  // namespace

RawDataset synth_dataset(SynthKind kind, int n_per_class, int side, std::uint64_t seed, int n_test_per_class) {
    if (side < 2) fail(ErrorKind::Validation, "synthetic image side must be >= 2");
    if (n_per_class < 0 || n_test_per_class < 0) fail(ErrorKind::Validation, "sample counts must be non-negative");
    const auto shapes = class_shapes(kind);
    RawDataset ds;
    ds.height = ds.width = side;
    ds.channels = 1;
    ds.n_classes = static_cast<int>(shapes.size());
    std::uint64_t sample = 0;
    for (Split split : {Split::Train, Split::Test}) {
        const int count = split == Split::Train ? n_per_class : n_test_per_class;
        for (int i = 0; i < count; ++i) {
            for (int c = 0; c < ds.n_classes; ++c) {
                Rng rng(derive_seed(seed, "synth", sample++));
                ds.images.push_back(synth_image(shapes[static_cast<std::size_t>(c)], side, rng));
                ds.labels.push_back(c);
                ds.splits.push_back(split);
            }
        }
    }
    return ds;
}

std::vector<std::size_t> stratified_indices(const std::vector<int>& labels, int n_classes, std::size_t per_class,
                                            std::uint64_t seed) {
    std::vector<std::size_t> order(labels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(derive_seed(seed, "stratify", 0));
    shuffle(order, rng);
    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(n_classes));
    for (std::size_t i : order) {
        const int c = labels[i];
        if (c < 0 || c >= n_classes) fail(ErrorKind::Validation, "label out of range in stratified selection");
        auto& bucket = by_class[static_cast<std::size_t>(c)];
        if (bucket.size() < per_class) bucket.push_back(i);
    }
    std::vector<std::size_t> out;
    for (int c = 0; c < n_classes; ++c) {
        const auto& bucket = by_class[static_cast<std::size_t>(c)];
        if (bucket.size() < per_class) {
            fail(ErrorKind::Validation, "class " + std::to_string(c) + " has " + std::to_string(bucket.size()) +
                                            " samples, need " + std::to_string(per_class));
        }
        out.insert(out.end(), bucket.begin(), bucket.end());
    }
    return out;
}

}  // namespace vqc::data
