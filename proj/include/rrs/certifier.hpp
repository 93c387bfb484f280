#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "rrs/order.hpp"

namespace rrs {

struct TopKSpec {
  std::size_t k = 1;
  double beta = 1.0;
  std::size_t k0 = 1;
  std::size_t n = 0;

  // 0-based sorted ranks [boundary_begin, boundary_begin + 2 k0).
  std::size_t boundary_begin() const { return k - k0; }
  std::size_t boundary_size() const { return 2 * k0; }
};

// k0 = floor((1 - beta) k) + 1. Throws InfeasibleSpec when k + k0 > n.
TopKSpec k0_and_boundary(std::size_t k, double beta, std::size_t n);
std::size_t k0_for(std::size_t k, double beta);

int select_shape(double d_prior, std::size_t n);
int shape_cap(std::size_t n);

// A map sorted once for repeated eps_robust evaluations.
class SortedMap {
 public:
  explicit SortedMap(const std::vector<double>& m);

  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }
  const std::vector<std::size_t>& order() const { return order_; }
  const std::vector<double>& original() const { return original_; }

 private:
  std::vector<double> original_;
  std::vector<double> sorted_;
  std::vector<std::size_t> order_;
};

// Minimizer structure of R_alpha(m~ || m) over maps that break beta-top-k.
// The adversarial map ties the pool Q at the power mean psi; Q is the top
// `demoted` ranks of the last k0 inside the top-k together with the bottom
// `promoted` ranks of the first k0 outside it.
struct PoolSolution {
  double eps = 0.0;
  double psi = 0.0;
  double z = 1.0;
  double phi = 0.0;
  std::size_t demoted = 0;
  std::size_t promoted = 0;
  std::size_t pool_begin_demoted = 0;
  std::size_t pool_begin_promoted = 0;

  std::size_t pool_size() const { return demoted + promoted; }
  bool in_pool(std::size_t rank) const {
    return (rank >= pool_begin_demoted && rank < pool_begin_demoted + demoted) ||
           (rank >= pool_begin_promoted && rank < pool_begin_promoted + promoted);
  }
};

enum class PoolMode {
  Exact,     // minimum over all consistent pools
  Boundary,  // all 2 k0 boundary ranks pooled
};

PoolSolution solve_pool(const SortedMap& m, const TopKSpec& spec, const RenyiOrder& alpha,
                        PoolMode mode = PoolMode::Exact);

double eps_robust(const SortedMap& m, const TopKSpec& spec, const RenyiOrder& alpha);
double eps_robust(const std::vector<double>& m, const TopKSpec& spec, const RenyiOrder& alpha);

struct WorstCaseSolution {
  std::vector<double> m_tilde;
  double m_breve = 0.0;
  double eps_at_alpha = 0.0;
  PoolSolution pool;
};

WorstCaseSolution worst_case_map(const std::vector<double>& m, const TopKSpec& spec,
                                 const RenyiOrder& alpha);

using EpsCurve = std::function<double(const RenyiOrder&)>;

struct AttackBound {
  double L = 0.0;
  RenyiOrder alpha_star = RenyiOrder::one_plus();
  double eps = 0.0;
  int d_star = 2;
  bool dimension_penalty_applied = false;
  bool sup_at_cap = false;
  std::optional<double> kl_row_L;  // only for d_prior = 2
};

// Table of certified attack sizes for a given eps(alpha) curve.
AttackBound certified_attack_size(const EpsCurve& eps, double sigma, double d_prior,
                                  std::size_t n);

// Grid used for the sup over alpha: alpha - 1 log-spaced over [1e-6, 999].
std::vector<double> alpha_grid(std::size_t points = 200);

enum class CertificateMode { MaxAttackSize, MaxBeta };

struct RobustnessCertificate {
  CertificateMode mode = CertificateMode::MaxAttackSize;
  double d_prior = 2.0;
  int d_star = 2;
  double sigma = 0.1;
  std::size_t n = 0;
  std::size_t k = 1;
  double beta = 1.0;
  double L = 0.0;
  RenyiOrder alpha_star = RenyiOrder::one_plus();
  double eps_robust = 0.0;
  bool dimension_penalty_applied = false;
  bool sup_at_cap = false;
  std::optional<double> kl_row_L;
  // finite-sample mode
  std::optional<double> eps_lower;
  std::optional<double> confidence;
  std::size_t samples = 0;
};

using EpsCurveFactory = std::function<EpsCurve(const SortedMap&, const TopKSpec&)>;

RobustnessCertificate certify_max_attack_curve(const SortedMap& m, const TopKSpec& spec,
                                               double sigma, double d_prior,
                                               const EpsCurveFactory& curve);

RobustnessCertificate certify_max_attack(const std::vector<double>& m, const TopKSpec& spec,
                                         double sigma, double d_prior);
RobustnessCertificate certify_max_attack(const SortedMap& m, const TopKSpec& spec, double sigma,
                                         double d_prior);

// Largest beta = j/k whose certified attack size reaches L. Specs with
// k + k0 > n cannot be violated and count as certified.
RobustnessCertificate certify_beta(const std::vector<double>& m, std::size_t k, double L,
                                   double sigma, double d_prior);
RobustnessCertificate certify_beta_curve(const SortedMap& m, std::size_t k, double L, double sigma,
                                         double d_prior, const EpsCurveFactory& curve);

}  // namespace rrs
