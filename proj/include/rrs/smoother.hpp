#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "rrs/image.hpp"
#include "rrs/interpreters.hpp"
#include "rrs/scoring.hpp"

namespace rrs {

struct SmoothingConfig {
  std::size_t T = 50;
  double sigma = 0.1;
  double d_prior = std::numeric_limits<double>::infinity();
  int d_star = 0;  // 0: derive from d_prior and n
  std::uint64_t seed = 0;
  double k_star = 0.0;  // 0: n / 4
  double eta = 1e-4;
  unsigned threads = 1;
};

struct SmoothedMap {
  std::vector<double> scores;
  std::size_t T = 0;
  double sigma = 0.0;
  int d_star = 0;
  std::uint64_t seed = 0;
};

ScoringVector scoring_for(const SmoothingConfig& cfg, std::size_t n);
int resolved_shape(const SmoothingConfig& cfg, std::size_t n);

// m = (1/T) sum_t rank_rescale(g(x + delta_t), v), delta_t ~ G(0, sigma, d*).
SmoothedMap smooth(const Interpreter& g, const Image& image, const SmoothingConfig& cfg);

SmoothedMap expected_map_reference(const Interpreter& g, const Image& image,
                                   const SmoothingConfig& cfg, std::size_t T_ref = 100000);

}  // namespace rrs
