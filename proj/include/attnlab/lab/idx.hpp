#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "attnlab/core/types.hpp"

namespace attnlab::lab {

/// Unsigned-byte IDX tensor (MNIST layout). Magic 0x00000801 for label
/// vectors, 0x00000803 for image stacks; all integers big-endian.
struct IdxTensor {
  std::uint32_t magic = 0;
  std::vector<std::uint32_t> dims;
  std::vector<std::uint8_t> data;

  std::size_t rank() const { return dims.size(); }
};

IdxTensor parse_idx(std::span<const std::uint8_t> bytes);
IdxTensor read_idx_file(const std::string& path);

/// N x (rows * cols) with pixels scaled to [0, 1].
Matrix idx_images(const IdxTensor& t);
std::vector<int> idx_labels(const IdxTensor& t);

}  // namespace attnlab::lab
