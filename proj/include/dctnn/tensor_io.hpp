#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dctnn/types.hpp"

namespace dctnn {

// KTNS tensor file: a 16-byte header followed by little-endian raw scalars.
//
//   bytes 0..3   magic "KTNS"
//   bytes 4..5   dtype code (u16): 1 = float64, 2 = float32,
//                                  3 = complex128 (interleaved re/im), 4 = uint8
//   bytes 6..7   rank (u16), at most 4
//   bytes 8..15  dims (u16 x 4), unused dims zero
//
// Row-major data. Used for checkpoints, golden files and datasets.

enum class Dtype : std::uint16_t { f64 = 1, f32 = 2, c128 = 3, u8 = 4 };

struct TensorHeader {
  Dtype dtype;
  std::uint16_t rank;
  std::array<std::uint16_t, 4> dims;
  std::size_t count() const;
};

void write_header(std::ostream& out, const TensorHeader& h);
TensorHeader read_header(std::istream& in);

void save_tensor(const Mat& m, const std::string& path);
void save_tensor(const CMat& m, const std::string& path);
void save_tensor_u8(const std::vector<std::uint8_t>& data, std::uint16_t rows,
                    std::uint16_t cols, const std::string& path);

Mat load_real_tensor(const std::string& path);
CMat load_complex_tensor(const std::string& path);
std::vector<std::uint8_t> load_u8_tensor(const std::string& path, std::uint16_t& rows,
                                         std::uint16_t& cols);

// Stream variants, used by the named-tensor container.
void write_tensor(std::ostream& out, const Mat& m);
Mat read_real_tensor(std::istream& in);

// Named-tensor container: a sequence of (u16 name length, name bytes, KTNS
// record). Checkpoints store every parameter this way next to a text manifest.
struct NamedTensor {
  std::string name;
  Mat value;
};

void save_named_tensors(const std::vector<NamedTensor>& tensors, const std::string& path);
std::vector<NamedTensor> load_named_tensors(const std::string& path);

}  // namespace dctnn
