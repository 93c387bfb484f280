#pragma once

#include <cstddef>
#include <vector>

namespace rrs {

struct Dims {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 1;

  std::size_t size() const { return height * width * channels; }
  bool operator==(const Dims&) const = default;
};

// Pixels are row-major with channels interleaved.
struct Image {
  Dims dims;
  std::vector<double> pixels;
  int label = 0;

  std::size_t size() const { return pixels.size(); }
};

}  // namespace rrs
