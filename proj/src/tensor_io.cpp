#include "dctnn/tensor_io.hpp"

#include <cstring>
#include <fstream>
#include <limits>

namespace dctnn {

namespace {

static_assert(std::numeric_limits<double>::is_iec559, "IEEE-754 doubles required");

void put_u16(std::ostream& out, std::uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
  out.write(b, 2);
}

std::uint16_t get_u16(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint16_t checked_dim(Index d, const char* what) {
  if (d < 0 || d > 0xffff) throw ContractError(std::string("tensor dim too large for KTNS: ") + what);
  return static_cast<std::uint16_t>(d);
}

}  // namespace

std::size_t TensorHeader::count() const {
  std::size_t n = 1;
  for (std::uint16_t i = 0; i < rank; ++i) n *= dims[i];
  return n;
}

void write_header(std::ostream& out, const TensorHeader& h) {
  out.write("KTNS", 4);
  put_u16(out, static_cast<std::uint16_t>(h.dtype));
  put_u16(out, h.rank);
  for (int i = 0; i < 4; ++i) put_u16(out, i < h.rank ? h.dims[i] : 0);
}

TensorHeader read_header(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "KTNS", 4) != 0) throw ContractError("bad tensor file: missing KTNS magic");
  TensorHeader h;
  h.dtype = static_cast<Dtype>(get_u16(in));
  h.rank = get_u16(in);
  if (h.rank > 4) throw ContractError("bad tensor file: rank > 4");
  for (int i = 0; i < 4; ++i) h.dims[static_cast<std::size_t>(i)] = get_u16(in);
  if (!in) throw ContractError("bad tensor file: truncated header");
  return h;
}

void write_tensor(std::ostream& out, const Mat& m) {
  TensorHeader h{Dtype::f64, 2, {checked_dim(m.rows(), "rows"), checked_dim(m.cols(), "cols"), 0, 0}};
  write_header(out, h);
  out.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(sizeof(Real) * static_cast<std::size_t>(m.size())));
}

Mat read_real_tensor(std::istream& in) {
  const TensorHeader h = read_header(in);
  if (h.dtype != Dtype::f64 || h.rank != 2) throw ContractError("expected rank-2 float64 tensor");
  Mat m(h.dims[0], h.dims[1]);
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(sizeof(Real) * h.count()));
  if (!in) throw ContractError("bad tensor file: truncated data");
  return m;
}

void save_tensor(const Mat& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  write_tensor(out, m);
}

void save_tensor(const CMat& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  TensorHeader h{Dtype::c128, 2, {checked_dim(m.rows(), "rows"), checked_dim(m.cols(), "cols"), 0, 0}};
  write_header(out, h);
  out.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(sizeof(Complex) * static_cast<std::size_t>(m.size())));
}

void save_tensor_u8(const std::vector<std::uint8_t>& data, std::uint16_t rows, std::uint16_t cols,
                    const std::string& path) {
  if (data.size() != static_cast<std::size_t>(rows) * cols) throw ContractError("u8 tensor size mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  TensorHeader h{Dtype::u8, 2, {rows, cols, 0, 0}};
  write_header(out, h);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

Mat load_real_tensor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open: " + path);
  return read_real_tensor(in);
}

CMat load_complex_tensor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open: " + path);
  const TensorHeader h = read_header(in);
  if (h.dtype != Dtype::c128 || h.rank != 2) throw ContractError("expected rank-2 complex128 tensor");
  CMat m(h.dims[0], h.dims[1]);
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(sizeof(Complex) * h.count()));
  if (!in) throw ContractError("bad tensor file: truncated data");
  return m;
}

std::vector<std::uint8_t> load_u8_tensor(const std::string& path, std::uint16_t& rows, std::uint16_t& cols) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open: " + path);
  const TensorHeader h = read_header(in);
  if (h.dtype != Dtype::u8 || h.rank != 2) throw ContractError("expected rank-2 uint8 tensor");
  rows = h.dims[0];
  cols = h.dims[1];
  std::vector<std::uint8_t> data(h.count());
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!in) throw ContractError("bad tensor file: truncated data");
  return data;
}

void save_named_tensors(const std::vector<NamedTensor>& tensors, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  for (const auto& t : tensors) {
    if (t.name.size() > 0xffff) throw ContractError("tensor name too long");
    put_u16(out, static_cast<std::uint16_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    write_tensor(out, t.value);
  }
}

std::vector<NamedTensor> load_named_tensors(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open: " + path);
  std::vector<NamedTensor> tensors;
  while (in.peek() != std::char_traits<char>::eof()) {
    const std::uint16_t len = get_u16(in);
    std::string name(len, '\0');
    in.read(name.data(), len);
    if (!in) throw ContractError("bad tensor container: truncated name");
    tensors.push_back({std::move(name), read_real_tensor(in)});
  }
  return tensors;
}

}  // namespace dctnn
