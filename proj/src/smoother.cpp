#include "rrs/smoother.hpp"

#include <cmath>
#include <string>

#include "rrs/certifier.hpp"
#include "rrs/errors.hpp"
#include "rrs/gnd.hpp"
#include "rrs/parallel.hpp"
#include "rrs/rng.hpp"

namespace rrs {

namespace {

constexpr std::size_t kBlock = 16;

}  // namespace

ScoringVector scoring_for(const SmoothingConfig& cfg, std::size_t n) {
  double k_star = cfg.k_star > 0.0 ? cfg.k_star : static_cast<double>(n) / 4.0;
  return build_scoring_vector(n, k_star, cfg.eta);
}

int resolved_shape(const SmoothingConfig& cfg, std::size_t n) {
  if (cfg.d_star != 0) {
    GndParams{0.0, 1.0, cfg.d_star}.validate();
    return cfg.d_star;
  }
  return select_shape(cfg.d_prior, std::max<std::size_t>(n, 2));
}

SmoothedMap smooth(const Interpreter& g, const Image& image, const SmoothingConfig& cfg) {
  const std::size_t n = image.pixels.size();
  if (n == 0) throw DomainError("empty image");
  if (g.input_size() != n) throw DimMismatch("interpreter does not accept this image size");
  if (cfg.T < 1) throw DomainError("T must be >= 1");
  if (!(cfg.sigma > 0.0)) throw DomainError("sigma must be positive");

  const ScoringVector v = scoring_for(cfg, n);
  const GndParams noise{0.0, cfg.sigma, resolved_shape(cfg, n)};
  noise.validate();

  const std::size_t blocks = (cfg.T + kBlock - 1) / kBlock;
  std::vector<std::vector<double>> block_sum(blocks);

  parallel_for(blocks, cfg.threads, [&](std::size_t b) {
    std::vector<double> acc(n, 0.0), x(n), ranked(n);
    std::vector<std::size_t> scratch;
    const std::size_t end = std::min(cfg.T, (b + 1) * kBlock);
    for (std::size_t t = b * kBlock; t < end; ++t) {
      Rng rng = make_rng(cfg.seed, t);
      sample_noise_into(noise, rng, x.data(), n);
      for (std::size_t i = 0; i < n; ++i) x[i] += image.pixels[i];
      std::vector<double> raw;
      try {
        raw = g.attribute(x, image.label);
      } catch (const std::exception& e) {
        throw InterpreterError(t, e.what());
      }
      if (raw.size() != n)
        throw InterpreterError(t, "interpreter returned " + std::to_string(raw.size()) +
                                      " values for " + std::to_string(n) + " inputs");
      for (double r : raw)
        if (std::isnan(r)) throw InterpreterError(t, "interpreter returned NaN");
      rank_rescale_into(raw.data(), v, ranked.data(), scratch);
      for (std::size_t i = 0; i < n; ++i) acc[i] += ranked[i];
    }
    block_sum[b] = std::move(acc);
  });

  // pairwise reduction in fixed block order
  for (std::size_t stride = 1; stride < blocks; stride *= 2)
    for (std::size_t b = 0; b + stride < blocks; b += 2 * stride)
      for (std::size_t i = 0; i < n; ++i) block_sum[b][i] += block_sum[b + stride][i];

  SmoothedMap out;
  out.scores = std::move(block_sum[0]);
  const double inv = 1.0 / static_cast<double>(cfg.T);
  for (double& s : out.scores) s *= inv;
  out.T = cfg.T;
  out.sigma = cfg.sigma;
  out.d_star = noise.shape_b;
  out.seed = cfg.seed;
  return out;
}

SmoothedMap expected_map_reference(const Interpreter& g, const Image& image,
                                   const SmoothingConfig& cfg, std::size_t T_ref) {
  SmoothingConfig c = cfg;
  c.T = T_ref;
  return smooth(g, image, c);
}

}  // namespace rrs
