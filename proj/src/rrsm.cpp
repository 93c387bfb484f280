#include "rrs/rrsm.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "rrs/errors.hpp"

namespace rrs {

namespace {

void put_u16(std::vector<unsigned char>& b, std::uint16_t v) {
  b.push_back(static_cast<unsigned char>(v & 0xff));
  b.push_back(static_cast<unsigned char>(v >> 8));
}

void put_u32(std::vector<unsigned char>& b, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) b.push_back(static_cast<unsigned char>((v >> s) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}

std::uint32_t checked_u32(std::size_t v) {
  if (v == 0 || v > std::numeric_limits<std::uint32_t>::max())
    throw InvalidHeader("map dimension out of range");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::vector<unsigned char> encode_map_f32(const Dims& dims, const std::vector<float>& values) {
  if (values.size() != dims.size())
    throw DimMismatch("map has " + std::to_string(values.size()) + " values, dims imply " +
                      std::to_string(dims.size()));
  std::vector<unsigned char> b;
  b.reserve(kRrsmHeaderSize + 4 * values.size());
  for (char ch : {'R', 'R', 'S', 'M'}) b.push_back(static_cast<unsigned char>(ch));
  put_u16(b, kRrsmVersion);
  put_u32(b, checked_u32(dims.height));
  put_u32(b, checked_u32(dims.width));
  put_u32(b, checked_u32(dims.channels));
  for (float f : values) put_u32(b, std::bit_cast<std::uint32_t>(f));
  return b;
}

std::vector<unsigned char> encode_map(const Dims& dims, const std::vector<double>& values) {
  std::vector<float> f(values.begin(), values.end());
  return encode_map_f32(dims, f);
}

void decode_map(const std::vector<unsigned char>& b, Dims& dims, std::vector<float>& values) {
  if (b.size() < 4) throw TruncatedFile(b.size());
  if (std::memcmp(b.data(), "RRSM", 4) != 0) throw BadMagic("not an RRSM file (bad magic)");
  if (b.size() < 6) throw TruncatedFile(b.size());
  std::uint16_t version = static_cast<std::uint16_t>(b[4] | (b[5] << 8));
  if (version != kRrsmVersion) throw UnsupportedVersion(version);
  if (b.size() < kRrsmHeaderSize) throw TruncatedFile(b.size());
  std::uint64_t h = get_u32(&b[6]), w = get_u32(&b[10]), c = get_u32(&b[14]);
  if (h == 0 || w == 0 || c == 0) throw InvalidHeader("RRSM header has a zero dimension");
  const unsigned __int128 count128 = static_cast<unsigned __int128>(h * w) * c;
  if (count128 > (std::numeric_limits<std::uint64_t>::max() - kRrsmHeaderSize) / 4)
    throw InvalidHeader("RRSM header dimensions overflow");
  // checked before any allocation so a hostile header cannot request memory
  if (count128 > (b.size() - kRrsmHeaderSize) / 4) throw TruncatedFile(b.size());
  const std::uint64_t count = h * w * c;
  if (b.size() != kRrsmHeaderSize + 4 * count)
    throw DimMismatch("RRSM payload has " + std::to_string(b.size() - kRrsmHeaderSize) +
                      " bytes, header implies " + std::to_string(4 * count));
  dims = {static_cast<std::size_t>(h), static_cast<std::size_t>(w), static_cast<std::size_t>(c)};
  values.resize(count);
  for (std::uint64_t i = 0; i < count; ++i)
    values[i] = std::bit_cast<float>(get_u32(&b[kRrsmHeaderSize + 4 * i]));
}

std::vector<unsigned char> read_file_bytes(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw MissingFile(path);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_map(const std::string& path, const Dims& dims, const std::vector<double>& values) {
  auto b = encode_map(dims, values);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path);
  f.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
  if (!f) throw Error("write failed for " + path);
}

void read_map_f32(const std::string& path, Dims& dims, std::vector<float>& values) {
  decode_map(read_file_bytes(path), dims, values);
}

void read_map(const std::string& path, Dims& dims, std::vector<double>& values) {
  std::vector<float> f;
  read_map_f32(path, dims, f);
  values.assign(f.begin(), f.end());
}

}  // namespace rrs
