#include "transval/data/idx.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>

#include "transval/core/error.hpp"

namespace transval {

namespace {

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void check_magic(std::uint32_t got, std::uint32_t want, const char* what) {
    if (got != want) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "IDX %s: bad magic 0x%08X (expected 0x%08X)", what, got,
                      want);
        throw FormatError(buf);
    }
}

void check_payload(std::span<const std::uint8_t> bytes, std::size_t header, std::size_t payload,
                   const char* what) {
    if (bytes.size() < header + payload) {
        throw FormatError(std::string("IDX ") + what + ": truncated payload (" +
                          std::to_string(bytes.size() - header) + " of " +
                          std::to_string(payload) + " bytes)");
    }
    if (bytes.size() > header + payload) {
        throw FormatError(std::string("IDX ") + what + ": trailing bytes after payload");
    }
}

}  // namespace

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
    if (offset + 4 > bytes.size()) throw FormatError("IDX: truncated header");
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

IdxImages parse_idx_images(std::span<const std::uint8_t> bytes) {
    check_magic(read_be32(bytes, 0), kIdxImageMagic, "images");
    IdxImages images;
    images.count = read_be32(bytes, 4);
    images.rows = read_be32(bytes, 8);
    images.cols = read_be32(bytes, 12);
    const std::size_t payload = std::size_t{images.count} * images.rows * images.cols;
    check_payload(bytes, 16, payload, "images");
    images.pixels.assign(bytes.begin() + 16, bytes.end());
    return images;
}

std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes) {
    check_magic(read_be32(bytes, 0), kIdxLabelMagic, "labels");
    const std::size_t count = read_be32(bytes, 4);
    check_payload(bytes, 8, count, "labels");
    return {bytes.begin() + 8, bytes.end()};
}

std::vector<std::uint8_t> encode_idx_images(const IdxImages& images) {
    if (images.pixels.size() != std::size_t{images.count} * images.rows * images.cols) {
        throw ContractError("encode_idx_images: pixel buffer does not match dimensions");
    }
    std::vector<std::uint8_t> out;
    out.reserve(16 + images.pixels.size());
    put_be32(out, kIdxImageMagic);
    put_be32(out, images.count);
    put_be32(out, images.rows);
    put_be32(out, images.cols);
    out.insert(out.end(), images.pixels.begin(), images.pixels.end());
    return out;
}

std::vector<std::uint8_t> encode_idx_labels(std::span<const std::uint8_t> labels) {
    std::vector<std::uint8_t> out;
    out.reserve(8 + labels.size());
    put_be32(out, kIdxLabelMagic);
    put_be32(out, static_cast<std::uint32_t>(labels.size()));
    out.insert(out.end(), labels.begin(), labels.end());
    return out;
}

Dataset idx_to_dataset(const IdxImages& images, std::span<const std::uint8_t> labels) {
    if (images.count != labels.size()) {
        throw ConsistencyError("IDX: " + std::to_string(images.count) + " images but " +
                               std::to_string(labels.size()) + " labels");
    }
    const std::size_t dim = std::size_t{images.rows} * images.cols;
    if (images.count == 0 || dim == 0) throw FormatError("IDX: empty image set");
    std::vector<double> features(images.pixels.size());
    std::transform(images.pixels.begin(), images.pixels.end(), features.begin(),
                   [](std::uint8_t v) { return static_cast<double>(v) / 255.0; });
    std::vector<double> targets(labels.begin(), labels.end());
    const std::size_t classes = std::size_t{*std::max_element(labels.begin(), labels.end())} + 1;
    return Dataset(TaskKind::classification, dim, std::move(features), std::move(targets),
                   classes);
}

IdxImages dataset_to_idx_images(const Dataset& data, std::uint32_t rows, std::uint32_t cols) {
    if (std::size_t{rows} * cols != data.dim()) {
        throw ContractError("dataset_to_idx_images: rows * cols must equal the dimension");
    }
    IdxImages images{static_cast<std::uint32_t>(data.size()), rows, cols, {}};
    images.pixels.reserve(data.features().size());
    for (double v : data.features()) {
        images.pixels.push_back(
            static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
    }
    return images;
}

std::vector<std::uint8_t> dataset_to_idx_labels(const Dataset& data) {
    std::vector<std::uint8_t> labels(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data.label(i) > 255) throw ContractError("IDX labels are single bytes");
        labels[i] = static_cast<std::uint8_t>(data.label(i));
    }
    return labels;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
    const auto image_bytes = read_file_bytes(images);
    const auto label_bytes = read_file_bytes(labels);
    return idx_to_dataset(parse_idx_images(image_bytes), parse_idx_labels(label_bytes));
}

}  // namespace transval
