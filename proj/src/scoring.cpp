#include "rrs/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rrs/errors.hpp"

namespace rrs {

namespace {

// 1 / (1 + e^z) without overflow.
double logistic_tail(double z) {
  if (z > 0.0) {
    double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

std::vector<double> checked_normalized(const std::vector<double>& p, const char* name) {
  double sum = 0.0;
  for (double x : p) {
    if (!(x > 0.0) || !std::isfinite(x))
      throw DomainError(std::string(name) + " must have strictly positive finite entries");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw DomainError(std::string(name) + " must sum to 1 (got " + std::to_string(sum) + ")");
  std::vector<double> out(p);
  for (double& x : out) x /= sum;
  return out;
}

}  // namespace

ScoringVector build_scoring_vector(std::size_t n, double k_star, double eta) {
  if (n == 0) throw DomainError("scoring vector needs n >= 1");
  if (!(eta > 0.0)) throw DomainError("scoring vector needs eta > 0");
  ScoringVector v;
  v.k_star = k_star;
  v.eta = eta;
  v.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double z = eta * (static_cast<double>(i + 1) - k_star);
    v.weights[i] = std::max(logistic_tail(z), 1e-300);
  }
  double z = 0.0;
  for (double w : v.weights) z += w;
  v.normalizer = z;
  for (double& w : v.weights) w = std::max(w / z, 1e-300);
  return v;
}

std::vector<std::size_t> descending_order(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
  return idx;
}

void rank_rescale_into(const double* raw, const ScoringVector& v, double* out,
                       std::vector<std::size_t>& idx) {
  const std::size_t n = v.size();
  idx.resize(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return raw[a] > raw[b]; });
  for (std::size_t r = 0; r < n; ++r) out[idx[r]] = v.weights[r];
}

std::vector<double> rank_rescale(const std::vector<double>& raw, const ScoringVector& v) {
  if (raw.size() != v.size()) throw DomainError("rank_rescale: length mismatch");
  for (double x : raw)
    if (std::isnan(x)) throw DomainError("rank_rescale: NaN in raw map");
  std::vector<double> out(raw.size());
  std::vector<std::size_t> scratch;
  rank_rescale_into(raw.data(), v, out.data(), scratch);
  return out;
}

std::vector<std::size_t> top_k_set(const std::vector<double>& map, std::size_t k) {
  if (k < 1 || k > map.size()) throw DomainError("top_k_set: k out of range");
  std::vector<std::size_t> idx = descending_order(map);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

double top_k_overlap(const std::vector<double>& a, const std::vector<double>& b, std::size_t k) {
  if (a.size() != b.size()) throw DomainError("top_k_overlap: length mismatch");
  auto ta = top_k_set(a, k);
  auto tb = top_k_set(b, k);
  std::vector<std::size_t> common;
  std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(k);
}

double renyi_robustness_divergence(const std::vector<double>& p_in,
                                   const std::vector<double>& q_in, const RenyiOrder& alpha) {
  if (p_in.size() != q_in.size() || p_in.empty())
    throw DomainError("renyi divergence: length mismatch");
  alpha.validate();
  auto p = checked_normalized(p_in, "p");
  auto q = checked_normalized(q_in, "q");
  const std::size_t n = p.size();
  if (p == q) return 0.0;
  if (alpha.is_one_plus()) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += p[i] * std::log(p[i] / q[i]);
    return std::max(0.0, s);
  }
  if (alpha.is_infinity()) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::log(p[i] / q[i]));
    return std::max(0.0, m);
  }
  const double a = alpha.value;
  // log-sum-exp of a ln p + (1-a) ln q
  std::vector<double> terms(n);
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    terms[i] = a * std::log(p[i]) + (1.0 - a) * std::log(q[i]);
    mx = std::max(mx, terms[i]);
  }
  double s = 0.0;
  for (double t : terms) s += std::exp(t - mx);
  return std::max(0.0, (mx + std::log(s)) / (a - 1.0));
}

}  // namespace rrs
