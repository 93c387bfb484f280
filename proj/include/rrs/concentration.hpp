#pragma once

#include <cstddef>
#include <vector>

#include "rrs/certifier.hpp"
#include "rrs/order.hpp"

namespace rrs {

struct ConcentrationBound {
  std::size_t T = 0;
  double confidence = 0.95;
  double delta_coord = 0.0;
  double lipschitz_C = 0.0;
  double eps_hat = 0.0;
  double eps_lower = 0.0;
  double phi_hat = 0.0;
  double psi_hat = 0.0;
};

// Per-coordinate Hoeffding radius with a union bound over n coordinates,
// for samples supported on an interval of length `range`.
double hoeffding_radius(std::size_t n, std::size_t T, double confidence, double range = 1.0);

// Sum over the active pool of |d phi / d m_i| = |(psi / m_i)^alpha - 1|.
double lipschitz_constant(const SortedMap& m, const TopKSpec& spec, const RenyiOrder& alpha);
double lipschitz_constant(const std::vector<double>& m, const TopKSpec& spec,
                          const RenyiOrder& alpha);

ConcentrationBound finite_sample_certificate(const SortedMap& m, const TopKSpec& spec,
                                             const RenyiOrder& alpha, std::size_t T,
                                             double confidence, double range = 1.0);
ConcentrationBound finite_sample_certificate(const std::vector<double>& m, const TopKSpec& spec,
                                             const RenyiOrder& alpha, std::size_t T,
                                             double confidence, double range = 1.0);

// eps_lower(alpha) as a curve for the certified attack size tables.
EpsCurveFactory lower_bound_curve(std::size_t T, double confidence, double range);

RobustnessCertificate certify_max_attack_finite(const std::vector<double>& m, const TopKSpec& spec,
                                                double sigma, double d_prior, std::size_t T,
                                                double confidence, double range);
RobustnessCertificate certify_beta_finite(const std::vector<double>& m, std::size_t k, double L,
                                          double sigma, double d_prior, std::size_t T,
                                          double confidence, double range);

}  // namespace rrs
