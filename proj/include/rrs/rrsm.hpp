#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rrs/image.hpp"

namespace rrs {

// Binary map format:
//   "RRSM" | u16 version | u32 height | u32 width | u32 channels |
//   h*w*c float32 values, all little-endian, row-major, channels interleaved.
inline constexpr std::uint16_t kRrsmVersion = 1;
inline constexpr std::size_t kRrsmHeaderSize = 18;

std::vector<unsigned char> encode_map(const Dims& dims, const std::vector<double>& values);
std::vector<unsigned char> encode_map_f32(const Dims& dims, const std::vector<float>& values);
void decode_map(const std::vector<unsigned char>& bytes, Dims& dims, std::vector<float>& values);

void write_map(const std::string& path, const Dims& dims, const std::vector<double>& values);
void read_map(const std::string& path, Dims& dims, std::vector<double>& values);
void read_map_f32(const std::string& path, Dims& dims, std::vector<float>& values);
std::vector<unsigned char> read_file_bytes(const std::string& path);

}  // namespace rrs
