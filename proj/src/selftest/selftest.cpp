#include "rrs/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "rrs/certifier.hpp"
#include "rrs/concentration.hpp"
#include "rrs/evaluation.hpp"
#include "rrs/gnd.hpp"
#include "rrs/interpreters.hpp"
#include "rrs/parallel.hpp"
#include "rrs/rng.hpp"
#include "rrs/scoring.hpp"
#include "rrs/smoother.hpp"

namespace rrs::selftest {

namespace {

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

SuiteResult divergence_vs_quadrature(double rel_tol) {
  Timer timer;
  SuiteResult r{"divergence_vs_quadrature", true, "", 0.0};
  const std::vector<int> shapes{1, 2, 4, 10};
  const std::vector<double> ts{0.1, 0.5, 1.0, 2.0, 3.0};
  const std::vector<RenyiOrder> alphas{RenyiOrder::one_plus(), RenyiOrder::finite(1.5),
                                       RenyiOrder::finite(2.0), RenyiOrder::finite(5.0),
                                       RenyiOrder::finite(20.0)};
  double worst = 0.0;
  std::string worst_case;
  int checked = 0;
  for (int b : shapes)
    for (double t : ts)
      for (const auto& a : alphas) {
        double closed;
        if (b == 1)
          closed = eps_alpha_laplace(t, a);
        else if (b == 2)
          closed = eps_gaussian(t, a.is_one_plus() ? 1.0 : a.value);
        else if (a.is_one_plus())
          closed = eps_kl_gnd(b, t);
        else
          continue;  // no closed form for general alpha at b > 2
        double numeric = numeric_renyi_divergence(GndParams{0.0, 1.0, b}, t, a);
        double rel = std::abs(closed - numeric) / std::max(std::abs(numeric), 1e-300);
        ++checked;
        if (rel > worst) {
          worst = rel;
          std::ostringstream os;
          os << "b=" << b << " t=" << t << " alpha=" << a.str();
          worst_case = os.str();
        }
      }
  std::ostringstream os;
  os << checked << " cases, max rel err " << worst << " at " << worst_case;
  r.pass = worst <= rel_tol && checked == 60;
  r.detail = os.str();
  r.seconds = timer.seconds();
  return r;
}

SuiteResult witness_tightness(std::size_t maps, std::uint64_t seed, double tol) {
  Timer timer;
  SuiteResult r{"witness_tightness", true, "", 0.0};
  Rng rng = make_rng(seed, 0);
  std::uniform_int_distribution<std::size_t> nd(2, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  std::size_t done = 0;
  while (done < maps) {
    std::size_t n = nd(rng);
    std::vector<double> m(n);
    double s = 0.0;
    // exponentials give a uniform point on the simplex; the floor keeps
    // entries strictly positive
    for (double& x : m) {
      x = -std::log(std::max(u(rng), 1e-12)) + 1e-6;
      s += x;
    }
    for (double& x : m) x /= s;
    std::size_t k = 1 + static_cast<std::size_t>(u(rng) * (n - 1));
    k = std::min(k, n - 1);
    double beta = std::max(1e-9, std::ceil(u(rng) * k) / static_cast<double>(k));
    if (k + k0_for(k, beta) > n) continue;
    TopKSpec spec = k0_and_boundary(k, beta, n);
    RenyiOrder a = u(rng) < 0.2 ? RenyiOrder::one_plus() : RenyiOrder::finite(1.0 + 19.0 * u(rng) + 1e-3);
    auto w = worst_case_map(m, spec, a);
    double eps = eps_robust(m, spec, a);
    double div = renyi_robustness_divergence(w.m_tilde, m, a);
    worst = std::max(worst, std::abs(div - eps));
    ++done;
  }
  std::ostringstream os;
  os << maps << " maps, max |R(m~||m) - eps| = " << worst;
  r.pass = worst <= tol;
  r.detail = os.str();
  r.seconds = timer.seconds();
  return r;
}

SuiteResult concentration_resampling(const ConcentrationSetup& s) {
  Timer timer;
  SuiteResult r{"concentration_resampling", true, "", 0.0};
  const std::size_t n = s.n;
  FunctionInterpreter g(n, [n, gap = s.gap](const std::vector<double>& x, int) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - gap * static_cast<double>(i);
    return out;
  });
  Image image;
  image.dims = {1, n, 1};
  image.pixels.assign(n, 0.5);

  SmoothingConfig cfg;
  cfg.sigma = s.sigma;
  cfg.d_prior = 2.0;
  cfg.eta = s.eta;
  cfg.k_star = static_cast<double>(s.k);
  cfg.threads = s.threads;
  cfg.seed = sub_seed(s.seed, 1000003);
  auto ref = expected_map_reference(g, image, cfg, s.T_ref);
  const TopKSpec spec = k0_and_boundary(s.k, s.beta, n);
  const double range = scoring_for(cfg, n).max_weight();

  std::ostringstream os;
  bool pass = true;
  for (const RenyiOrder& a : {RenyiOrder::one_plus(), RenyiOrder::finite(2.0)}) {
    const double truth = eps_robust(ref.scores, spec, a);
    std::vector<double> lower(s.trials);
    parallel_for(s.trials, s.threads, [&](std::size_t t) {
      SmoothingConfig c = cfg;
      c.T = s.T;
      c.threads = 1;
      c.seed = sub_seed(s.seed, t);
      auto m = smooth(g, image, c);
      lower[t] = finite_sample_certificate(m.scores, spec, a, s.T, s.confidence, range).eps_lower;
    });
    std::size_t violations = 0, informative = 0;
    double mean_lower = 0.0;
    for (double l : lower) {
      mean_lower += l;
      violations += truth < l;
      informative += l > 0.0;
    }
    double rate = static_cast<double>(violations) / static_cast<double>(s.trials);
    pass = pass && rate <= 1.0 - s.confidence;
    os << "alpha=" << a.str() << ": eps_ref=" << truth
       << " mean eps_lower=" << mean_lower / static_cast<double>(s.trials)
       << " violations=" << violations << "/" << s.trials << " nonvacuous=" << informative
       << "/" << s.trials << "; ";
  }
  r.pass = pass;
  r.detail = os.str();
  r.seconds = timer.seconds();
  return r;
}

std::vector<SuiteResult> run_all(unsigned threads) {
  ConcentrationSetup cs;
  cs.threads = threads;
  return {divergence_vs_quadrature(), witness_tightness(), concentration_resampling(cs)};
}

}  // namespace rrs::selftest
