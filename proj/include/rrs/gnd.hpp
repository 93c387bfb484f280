#pragma once

#include <cstdint>
#include <vector>

#include "rrs/order.hpp"
#include "rrs/rng.hpp"

namespace rrs {

// Generalized normal distribution G(mu, sigma^2, b); sigma is the standard
// deviation, not the natural scale.
struct GndParams {
  double mu = 0.0;
  double sigma = 1.0;
  int shape_b = 2;

  void validate() const;
  double sigma_star() const;
};

std::vector<double> sample_noise(const GndParams& p, std::size_t n, std::uint64_t seed);
void sample_noise_into(const GndParams& p, Rng& rng, double* out, std::size_t n);

double pdf(const GndParams& p, double x);
double log_pdf(const GndParams& p, double x);

// Divergences between G(0, sigma, b) and G(t*sigma, sigma, b); t = L / sigma.
double eps_alpha_laplace(double t, const RenyiOrder& alpha);
double eps_alpha_laplace(double t, double alpha);
double eps_gaussian(double t, double alpha);
double eps_kl_gnd(int shape_b, double t);

struct DivergenceKind {
  enum class Family { Laplace, Gaussian, KlGnd };
  Family family = Family::Gaussian;
  RenyiOrder alpha = RenyiOrder::finite(2.0);
  int shape_b = 2;

  static DivergenceKind laplace(RenyiOrder a) { return {Family::Laplace, a, 1}; }
  static DivergenceKind gaussian(double a) {
    return {Family::Gaussian, RenyiOrder::finite(a), 2};
  }
  static DivergenceKind kl_gnd(int b) { return {Family::KlGnd, RenyiOrder::one_plus(), b}; }

  double forward(double t) const;
};

// Smallest t >= 0 with kind.forward(t) = eps, by bisection.
double invert_divergence(const DivergenceKind& kind, double eps);

struct QuadratureInfo {
  double value = 0.0;
  double error_estimate = 0.0;
  int intervals = 0;
};

// Adaptive Gauss-Kronrod evaluation of D_alpha(G(0,sigma,b) || G(L,sigma,b)).
double numeric_renyi_divergence(const GndParams& p, double shift_L, const RenyiOrder& alpha,
                                QuadratureInfo* info = nullptr);

// Integral of pdf over the real line, same quadrature machinery.
double numeric_pdf_mass(const GndParams& p);

}  // namespace rrs
