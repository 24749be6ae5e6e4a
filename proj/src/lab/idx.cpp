#include "attnlab/lab/idx.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>

#include "attnlab/core/error.hpp"

namespace attnlab::lab {

namespace {

constexpr std::uint32_t kLabelMagic = 0x00000801;
constexpr std::uint32_t kImageMagic = 0x00000803;

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

std::string hex(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08X", v);
  return buf;
}

}  // namespace

IdxTensor parse_idx(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw FormatError("idx: file shorter than the 4-byte magic");
  IdxTensor t;
  t.magic = read_be32(bytes, 0);
  if (t.magic != kLabelMagic && t.magic != kImageMagic) {
    throw FormatError("idx: bad magic " + hex(t.magic) + " (expected 0x00000801 or 0x00000803)");
  }
  const std::size_t rank = t.magic & 0xFFu;
  const std::size_t header = 4 + 4 * rank;
  if (bytes.size() < header) {
    throw FormatError("idx: length " + std::to_string(bytes.size()) + " too short for a rank-" +
                      std::to_string(rank) + " header");
  }
  std::size_t count = 1;
  for (std::size_t d = 0; d < rank; ++d) {
    t.dims.push_back(read_be32(bytes, 4 + 4 * d));
    count *= t.dims.back();
  }
  if (bytes.size() - header != count) {
    throw FormatError("idx: length mismatch, header declares " + std::to_string(count) + " payload bytes, found " +
                      std::to_string(bytes.size() - header));
  }
  t.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header), bytes.end());
  return t;
}

IdxTensor read_idx_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("idx: cannot open " + path);
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_idx(bytes);
}

Matrix idx_images(const IdxTensor& t) {
  if (t.magic != kImageMagic) throw FormatError("idx: " + hex(t.magic) + " is not an image file");
  const Index n = t.dims[0];
  const Index width = Index{t.dims[1]} * Index{t.dims[2]};
  Matrix out(n, width);
  for (Index i = 0; i < n * width; ++i) out.data()[i] = t.data[static_cast<std::size_t>(i)] / 255.0;
  return out;
}

std::vector<int> idx_labels(const IdxTensor& t) {
  if (t.magic != kLabelMagic) throw FormatError("idx: " + hex(t.magic) + " is not a label file");
  return {t.data.begin(), t.data.end()};
}

}  // namespace attnlab::lab
