#include "rrs/concentration.hpp"

#include <algorithm>
#include <cmath>

#include "rrs/errors.hpp"

namespace rrs {

double hoeffding_radius(std::size_t n, std::size_t T, double confidence, double range) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw DomainError("confidence must be in (0, 1)");
  if (T < 1) throw DomainError("T must be >= 1");
  if (!(range >= 0.0)) throw DomainError("range must be >= 0");
  return range * std::sqrt(std::log(static_cast<double>(n) / (1.0 - confidence)) /
                           (2.0 * static_cast<double>(T)));
}

double lipschitz_constant(const SortedMap& m, const TopKSpec& spec, const RenyiOrder& alpha) {
  PoolSolution pool = solve_pool(m, spec, alpha);
  const double a = alpha.is_one_plus() ? 1.0 : alpha.value;
  double c = 0.0;
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (!pool.in_pool(r)) continue;
    c += std::abs(std::pow(pool.psi / m.sorted()[r], a) - 1.0);
  }
  return c;
}

double lipschitz_constant(const std::vector<double>& m, const TopKSpec& spec,
                          const RenyiOrder& alpha) {
  return lipschitz_constant(SortedMap(m), spec, alpha);
}

ConcentrationBound finite_sample_certificate(const SortedMap& m, const TopKSpec& spec,
                                             const RenyiOrder& alpha, std::size_t T,
                                             double confidence, double range) {
  ConcentrationBound b;
  b.T = T;
  b.confidence = confidence;
  b.delta_coord = hoeffding_radius(m.size(), T, confidence, range);
  PoolSolution pool = solve_pool(m, spec, alpha);
  b.phi_hat = pool.phi;
  b.psi_hat = pool.psi;
  b.eps_hat = pool.eps;
  b.lipschitz_C = lipschitz_constant(m, spec, alpha);
  b.eps_lower = std::max(0.0, -std::log1p(b.phi_hat + b.delta_coord * b.lipschitz_C));
  b.eps_lower = std::min(b.eps_lower, b.eps_hat);
  return b;
}

ConcentrationBound finite_sample_certificate(const std::vector<double>& m, const TopKSpec& spec,
                                             const RenyiOrder& alpha, std::size_t T,
                                             double confidence, double range) {
  return finite_sample_certificate(SortedMap(m), spec, alpha, T, confidence, range);
}

EpsCurveFactory lower_bound_curve(std::size_t T, double confidence, double range) {
  hoeffding_radius(2, T, confidence, range);
  return [=](const SortedMap& m, const TopKSpec& spec) -> EpsCurve {
    return [&m, spec, T, confidence, range](const RenyiOrder& a) {
      return finite_sample_certificate(m, spec, a, T, confidence, range).eps_lower;
    };
  };
}

RobustnessCertificate certify_max_attack_finite(const std::vector<double>& m, const TopKSpec& spec,
                                                double sigma, double d_prior, std::size_t T,
                                                double confidence, double range) {
  SortedMap sm(m);
  auto c = certify_max_attack_curve(sm, spec, sigma, d_prior,
                                    lower_bound_curve(T, confidence, range));
  c.samples = T;
  c.confidence = confidence;
  return c;
}

RobustnessCertificate certify_beta_finite(const std::vector<double>& m, std::size_t k, double L,
                                          double sigma, double d_prior, std::size_t T,
                                          double confidence, double range) {
  SortedMap sm(m);
  auto c = certify_beta_curve(sm, k, L, sigma, d_prior, lower_bound_curve(T, confidence, range));
  c.samples = T;
  c.confidence = confidence;
  if (!c.eps_lower) c.eps_lower = 0.0;
  return c;
}

}  // namespace rrs
