#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rrs/errors.hpp"
#include "rrs/gnd.hpp"

namespace rrs {
namespace {

const RenyiOrder kOnePlus = RenyiOrder::one_plus();

TEST(SampleNoise, GaussianMoments) {
  auto x = sample_noise({0.0, 1.0, 2}, 100000, 42);
  double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  EXPECT_NEAR(mean, 0.0, 0.02);
  EXPECT_NEAR(std::sqrt(var / x.size()), 1.0, 0.02);
}

TEST(SampleNoise, GaussianShapeIsStandardNormal) {
  auto x = sample_noise({0.0, 1.0, 2}, 100000, 3);
  EXPECT_LT(oracle::ks_normal(x, 0.0, 1.0), 0.01);
}

TEST(SampleNoise, StdMatchesSigmaForAllShapes) {
  for (int b : {1, 4, 10}) {
    auto x = sample_noise({0.5, 0.2, b}, 100000, 9);
    double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    // 3-sigma Monte-Carlo bands at 1e5 draws
    EXPECT_NEAR(mean, 0.5, 3.0 * 0.2 / std::sqrt(1e5)) << "b=" << b;
    EXPECT_NEAR(std::sqrt(var / x.size()), 0.2, 0.004) << "b=" << b;
  }
}

TEST(SampleNoise, SameSeedSameBits) {
  auto a = sample_noise({0.0, 1.0, 4}, 1000, 5);
  auto b = sample_noise({0.0, 1.0, 4}, 1000, 5);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, sample_noise({0.0, 1.0, 4}, 1000, 6));
}

TEST(SampleNoise, RejectsBadShape) {
  EXPECT_THROW(sample_noise({0.0, 1.0, 3}, 10, 0), ParameterError);
  EXPECT_THROW(sample_noise({0.0, 1.0, 0}, 10, 0), ParameterError);
  EXPECT_THROW(sample_noise({0.0, -1.0, 2}, 10, 0), ParameterError);
}

TEST(Pdf, Reductions) {
  EXPECT_NEAR(pdf({0.0, 1.0, 2}, 0.0), 1.0 / std::sqrt(2.0 * M_PI), 1e-15);
  EXPECT_NEAR(pdf({0.0, 1.0, 1}, 0.0), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Pdf, IntegratesToOne) {
  for (int b : {1, 2, 4, 10}) EXPECT_NEAR(numeric_pdf_mass({0.0, 1.0, b}), 1.0, 1e-8) << b;
}

TEST(EpsLaplace, Values) {
  EXPECT_EQ(eps_alpha_laplace(0.0, 2.0), 0.0);
  double want = std::log(2.0 / 3.0 * std::exp(2.0) + 1.0 / 3.0 * std::exp(-4.0));
  EXPECT_NEAR(eps_alpha_laplace(std::sqrt(2.0), 2.0), want, 1e-14);
  EXPECT_NEAR(eps_alpha_laplace(std::sqrt(2.0), 2.0), 1.5958, 5e-5);
  EXPECT_DOUBLE_EQ(eps_alpha_laplace(1.3, RenyiOrder::infinity()), std::sqrt(2.0) * 1.3);
  EXPECT_NEAR(eps_alpha_laplace(1.3, 1e6), std::sqrt(2.0) * 1.3, 1e-5);
}

TEST(EpsLaplace, RejectsAlphaAtMostOne) {
  EXPECT_THROW(eps_alpha_laplace(1.0, 1.0), DomainError);
  EXPECT_THROW(eps_alpha_laplace(1.0, 0.5), DomainError);
  EXPECT_THROW(eps_alpha_laplace(-1.0, 2.0), DomainError);
}

TEST(EpsGaussian, Values) {
  EXPECT_DOUBLE_EQ(eps_gaussian(1.0, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(eps_gaussian(0.0, 7.0), 0.0);
  EXPECT_DOUBLE_EQ(eps_gaussian(2.0, 1.0), 2.0);
}

TEST(EpsKlGnd, Values) {
  EXPECT_NEAR(eps_kl_gnd(2, 1.0), 0.5, 1e-15);
  // quadrature value computed independently: 0.79965675...
  EXPECT_NEAR(eps_kl_gnd(4, 1.0), 0.7996567, 1e-6);
  EXPECT_EQ(eps_kl_gnd(10, 0.0), 0.0);
  EXPECT_THROW(eps_kl_gnd(3, 1.0), DomainError);
}

TEST(Divergences, StrictlyIncreasingInT) {
  for (double t = 0.05; t < 3.0; t += 0.05) {
    EXPECT_LT(eps_alpha_laplace(t, 2.0), eps_alpha_laplace(t + 0.01, 2.0));
    EXPECT_LT(eps_alpha_laplace(t, kOnePlus), eps_alpha_laplace(t + 0.01, kOnePlus));
    EXPECT_LT(eps_kl_gnd(6, t), eps_kl_gnd(6, t + 0.01));
    EXPECT_LT(eps_gaussian(t, 3.0), eps_gaussian(t + 0.01, 3.0));
  }
}

TEST(InvertDivergence, ClosedForms) {
  EXPECT_NEAR(invert_divergence(DivergenceKind::gaussian(2.0), 1.0), 1.0, 1e-12);
  EXPECT_NEAR(invert_divergence(DivergenceKind::kl_gnd(2), 0.5), 1.0, 1e-12);
  EXPECT_EQ(invert_divergence(DivergenceKind::kl_gnd(4), 0.0), 0.0);
  EXPECT_THROW(invert_divergence(DivergenceKind::gaussian(2.0), -1.0), DomainError);
}

TEST(InvertDivergence, RoundTrip) {
  const std::vector<DivergenceKind> kinds{
      DivergenceKind::laplace(RenyiOrder::finite(1.5)), DivergenceKind::laplace(RenyiOrder::finite(20)),
      DivergenceKind::laplace(kOnePlus), DivergenceKind::gaussian(3.0), DivergenceKind::kl_gnd(4),
      DivergenceKind::kl_gnd(10)};
  for (const auto& kind : kinds)
    for (double t = 0.0; t <= 3.0; t += 0.125)
      EXPECT_NEAR(invert_divergence(kind, kind.forward(t)), t, 1e-8);
}

TEST(NumericRenyi, SpecExamples) {
  EXPECT_NEAR(numeric_renyi_divergence({0.0, 1.0, 2}, 1.0, RenyiOrder::finite(2)), 1.0, 1e-6);
  EXPECT_NEAR(numeric_renyi_divergence({0.0, 1.0, 1}, std::sqrt(2.0), RenyiOrder::finite(2)),
              eps_alpha_laplace(std::sqrt(2.0), 2.0), 1e-6);
  EXPECT_EQ(numeric_renyi_divergence({0.0, 1.0, 4}, 0.0, RenyiOrder::finite(3)), 0.0);
}

TEST(NumericRenyi, FarPeak) {
  // alpha = 20, t = 3: the integrand peaks 57 standard deviations away
  EXPECT_NEAR(numeric_renyi_divergence({0.0, 1.0, 2}, 3.0, RenyiOrder::finite(20)), 90.0, 1e-7);
}

TEST(NumericRenyi, ScaleInvariant) {
  double a = numeric_renyi_divergence({0.0, 1.0, 4}, 0.7, kOnePlus);
  double b = numeric_renyi_divergence({0.0, 0.25, 4}, 0.175, kOnePlus);
  EXPECT_NEAR(a, b, 1e-9 * a);
}

}  // namespace
}  // namespace rrs
