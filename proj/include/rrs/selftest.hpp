#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rrs::selftest {

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Closed-form divergences against adaptive quadrature over
// b in {1,2,4,10}, t in {0.1,0.5,1,2,3}, alpha in {1+,1.5,2,5,20}.
SuiteResult divergence_vs_quadrature(double rel_tol = 1e-6);

// R_alpha(worst_case_map(m) || m) against eps_robust on random maps, n <= 8.
SuiteResult witness_tightness(std::size_t maps = 1000, std::uint64_t seed = 7,
                              double tol = 1e-9);

// Synthetic interpreter g(x)_i = x_i - gap * i on a constant image: a ranked
// ramp whose ranks the noise reshuffles near the boundary.
struct ConcentrationSetup {
  std::size_t trials = 1000;
  std::size_t T = 50;
  std::size_t T_ref = 100000;
  double confidence = 0.95;
  double sigma = 0.1;
  std::size_t n = 8;
  std::size_t k = 2;
  double beta = 0.5;
  double gap = 0.3;
  double eta = 1.0;
  std::uint64_t seed = 11;
  unsigned threads = 1;
};

// Fraction of resampled T-sample maps whose eps_lower exceeds the reference
// eps_robust must stay <= 1 - confidence. Also reports how often the bound
// is non-vacuous (eps_lower > 0).
SuiteResult concentration_resampling(const ConcentrationSetup& setup = {});

std::vector<SuiteResult> run_all(unsigned threads = 1);

}  // namespace rrs::selftest
