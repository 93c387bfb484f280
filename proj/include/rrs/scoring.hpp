#pragma once

#include <cstddef>
#include <vector>

#include "rrs/order.hpp"

namespace rrs {

struct ScoringVector {
  std::vector<double> weights;
  double k_star = 1.0;
  double eta = 1e-4;
  double normalizer = 1.0;

  std::size_t size() const { return weights.size(); }
  double max_weight() const { return weights.empty() ? 0.0 : weights.front(); }
};

// v_i proportional to 1 / (1 + exp(eta (i - k_star))), i = 1..n.
ScoringVector build_scoring_vector(std::size_t n, double k_star, double eta);

// Indices sorted by descending value, ties by ascending index.
std::vector<std::size_t> descending_order(const std::vector<double>& x);

// out[i] = v[rank(raw[i])].
std::vector<double> rank_rescale(const std::vector<double>& raw, const ScoringVector& v);
void rank_rescale_into(const double* raw, const ScoringVector& v, double* out,
                       std::vector<std::size_t>& scratch);

std::vector<std::size_t> top_k_set(const std::vector<double>& map, std::size_t k);

double top_k_overlap(const std::vector<double>& a, const std::vector<double>& b, std::size_t k);

// R_alpha(p || q) = 1/(alpha-1) ln sum p^alpha q^(1-alpha).
double renyi_robustness_divergence(const std::vector<double>& p, const std::vector<double>& q,
                                   const RenyiOrder& alpha);

}  // namespace rrs
