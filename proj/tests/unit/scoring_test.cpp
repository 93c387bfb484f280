#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rrs/errors.hpp"
#include "rrs/scoring.hpp"

namespace rrs {
namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

TEST(ScoringVector, SaturatedSigmoid) {
  auto v = build_scoring_vector(2, 1.0, 1e3);
  EXPECT_NEAR(v.weights[0], 1.0, 1e-12);
  EXPECT_GT(v.weights[1], 0.0);
  EXPECT_LT(v.weights[1], 1e-200);
}

TEST(ScoringVector, FlatSigmoid) {
  auto v = build_scoring_vector(4, 2.0, 1e-12);
  for (double w : v.weights) EXPECT_NEAR(w, 0.25, 1e-12);
}

TEST(ScoringVector, InvariantsOverGrid) {
  for (std::size_t n : {1u, 7u, 100u, 10000u}) {
    for (double ks : {1.0, n / 4.0, static_cast<double>(n)}) {
      for (double eta : {1e-4, 0.1, 1.0, 50.0}) {
        auto v = build_scoring_vector(n, ks, eta);
        EXPECT_NEAR(sum(v.weights), 1.0, 1e-12);
        for (std::size_t i = 0; i < n; ++i) {
          EXPECT_GT(v.weights[i], 0.0);
          EXPECT_LE(v.weights[i], 1.0);
          if (i > 0) {
            EXPECT_LE(v.weights[i], v.weights[i - 1]);
          }
        }
      }
    }
  }
}

TEST(ScoringVector, LargeMapScale) {
  auto v = build_scoring_vector(10000, 2500, 1e-4);
  EXPECT_NEAR(sum(v.weights), 1.0, 1e-12);
  EXPECT_TRUE(std::is_sorted(v.weights.rbegin(), v.weights.rend()));
}

TEST(RankRescale, Examples) {
  ScoringVector v;
  v.weights = {0.5, 0.3, 0.2};
  EXPECT_EQ(rank_rescale({3, 1, 2}, v), (std::vector<double>{0.5, 0.2, 0.3}));
  v.weights = {0.7, 0.3};
  EXPECT_EQ(rank_rescale({1, 1}, v), (std::vector<double>{0.7, 0.3}));
  auto u = build_scoring_vector(5, 2, 1e-14);
  auto out = rank_rescale({4, -1, 9, 0, 2}, u);
  for (double x : out) EXPECT_NEAR(x, 0.2, 1e-12);
}

TEST(RankRescale, IsPermutationOfWeights) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  auto v = build_scoring_vector(50, 10, 0.3);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> raw(50);
    for (double& x : raw) x = std::round(nd(rng) * 3);  // plenty of ties
    auto out = rank_rescale(raw, v);
    auto a = out, b = v.weights;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
  }
}

TEST(TopK, Examples) {
  EXPECT_EQ(top_k_set({1, 2, 3}, 2), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(top_k_set({5, 5, 1}, 1), (std::vector<std::size_t>{0}));
  EXPECT_EQ(top_k_set({3, 1, 2}, 3), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_THROW(top_k_set({1, 2}, 0), DomainError);
  EXPECT_THROW(top_k_set({1, 2}, 3), DomainError);
}

TEST(TopKOverlap, Examples) {
  EXPECT_EQ(top_k_overlap({1, 2, 3}, {2, 1, 2}, 2), 0.5);
  EXPECT_EQ(top_k_overlap({4, 1, 3, 2}, {4, 1, 3, 2}, 3), 1.0);
  EXPECT_EQ(top_k_overlap({1, 0}, {0, 1}, 1), 0.0);
  EXPECT_THROW(top_k_overlap({1, 0}, {0, 1, 2}, 1), DomainError);
}

TEST(TopKOverlap, RankOnlyProperties) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> a(20), b(20), ta(20), tb(20);
    for (std::size_t i = 0; i < 20; ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
      ta[i] = std::exp(3.0 * a[i]);
      tb[i] = std::exp(3.0 * b[i]);
    }
    for (std::size_t k : {1u, 5u, 13u}) {
      EXPECT_EQ(top_k_overlap(a, b, k), top_k_overlap(b, a, k));
      EXPECT_EQ(top_k_overlap(a, b, k), top_k_overlap(ta, tb, k));
    }
    std::vector<double> aff(a);
    for (double& x : aff) x = 2.5 * x + 7.0;
    EXPECT_EQ(top_k_set(a, 6), top_k_set(aff, 6));
  }
}

TEST(RenyiDivergence, Examples) {
  const std::vector<double> p{0.5, 0.5}, q{0.25, 0.75};
  EXPECT_NEAR(renyi_robustness_divergence(p, q, RenyiOrder::finite(2)), std::log(4.0 / 3.0), 1e-15);
  for (auto a : {RenyiOrder::one_plus(), RenyiOrder::finite(3), RenyiOrder::infinity()})
    EXPECT_EQ(renyi_robustness_divergence(p, p, a), 0.0);
}

TEST(RenyiDivergence, MonotoneInOrderAndNonnegative) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    std::size_t n = 2 + s % 9;
    auto p = oracle::random_simplex(n, 2 * s + 1), q = oracle::random_simplex(n, 2 * s + 2);
    double prev = -1.0;
    for (auto a : {RenyiOrder::one_plus(), RenyiOrder::finite(1.5), RenyiOrder::finite(2),
                   RenyiOrder::finite(5), RenyiOrder::infinity()}) {
      double d = renyi_robustness_divergence(p, q, a);
      EXPECT_GT(d, 0.0);
      EXPECT_GE(d, prev - 1e-12);
      prev = d;
    }
  }
}

TEST(RenyiDivergence, Validation) {
  EXPECT_THROW(renyi_robustness_divergence({1.0, 0.0}, {0.5, 0.5}, RenyiOrder::finite(2)), DomainError);
  EXPECT_THROW(renyi_robustness_divergence({0.6, 0.6}, {0.5, 0.5}, RenyiOrder::finite(2)), DomainError);
  EXPECT_THROW(renyi_robustness_divergence({0.5, 0.5}, {0.5, 0.5}, RenyiOrder::finite(1.0)), DomainError);
  // within 1e-6 of normalized: accepted and renormalized
  EXPECT_NO_THROW(renyi_robustness_divergence({0.5 + 4e-7, 0.5}, {0.5, 0.5}, RenyiOrder::finite(2)));
}

}  // namespace
}  // namespace rrs
