#pragma once

// IDX containers (the MNIST distribution format): big-endian u32 magic
// 0x00000803 for u8 images with 3 dims, 0x00000801 for u8 labels with 1 dim,
// then one big-endian u32 per dimension, then the payload.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "transval/core/dataset.hpp"

namespace transval {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;  // 2051
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;  // 2049

struct IdxImages {
    std::uint32_t count = 0;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<std::uint8_t> pixels;  // count * rows * cols
};

/// Big-endian u32 at `offset`; throws FormatError past the end.
std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset);

IdxImages parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_idx_images(const IdxImages& images);
std::vector<std::uint8_t> encode_idx_labels(std::span<const std::uint8_t> labels);

/// Pixels scaled to [0, 1]; class count is 1 + the largest label.
Dataset idx_to_dataset(const IdxImages& images, std::span<const std::uint8_t> labels);

/// Inverse of idx_to_dataset (pixels rounded back to bytes).
IdxImages dataset_to_idx_images(const Dataset& data, std::uint32_t rows, std::uint32_t cols);
std::vector<std::uint8_t> dataset_to_idx_labels(const Dataset& data);

Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace transval
