#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace oracle {

namespace {

std::vector<std::vector<std::size_t>> subsets(const std::vector<std::size_t>& items, std::size_t r) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> pick(items.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(r), true);
  do {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < items.size(); ++i)
      if (pick[i]) s.push_back(items[i]);
    out.push_back(s);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

double divergence(const std::vector<double>& q, const std::vector<double>& m, const rrs::RenyiOrder& a) {
  if (a.is_one_plus()) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s += q[i] * std::log(q[i] / m[i]);
    return s;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += std::pow(q[i], a.value) * std::pow(m[i], 1.0 - a.value);
  return std::log(s) / (a.value - 1.0);
}

}  // namespace

double brute_force_min_divergence(const std::vector<double>& m, std::size_t k, std::size_t k0,
                                  const rrs::RenyiOrder& alpha, int restarts, std::uint64_t seed) {
  const std::size_t n = m.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return m[a] > m[b]; });
  std::vector<std::size_t> top(order.begin(), order.begin() + static_cast<long>(k));
  std::vector<std::size_t> rest(order.begin() + static_cast<long>(k), order.end());

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  double best = std::numeric_limits<double>::infinity();
  const double a = alpha.is_one_plus() ? 1.0 : alpha.value;

  for (const auto& D : subsets(top, k0))
    for (const auto& P : subsets(rest, k0))
      for (int r = 0; r < restarts; ++r) {
        std::vector<double> theta(n), q(n), gq(n), mom(n, 0.0), vel(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) theta[i] = std::log(m[i]) + 0.5 * nd(rng);
        int step = 0;
        for (double mu : {1e1, 1e2, 1e3, 1e4, 1e5}) {
          for (int it = 0; it < 400; ++it, ++step) {
            double mx = *std::max_element(theta.begin(), theta.end()), z = 0.0;
            for (std::size_t i = 0; i < n; ++i) z += (q[i] = std::exp(theta[i] - mx));
            for (double& v : q) v /= z;
            if (alpha.is_one_plus()) {
              for (std::size_t i = 0; i < n; ++i) gq[i] = std::log(q[i] / m[i]) + 1.0;
            } else {
              double s = 0.0;
              for (std::size_t i = 0; i < n; ++i) s += std::pow(q[i], a) * std::pow(m[i], 1.0 - a);
              for (std::size_t i = 0; i < n; ++i)
                gq[i] = a * std::pow(q[i], a - 1.0) * std::pow(m[i], 1.0 - a) / ((a - 1.0) * s);
            }
            for (std::size_t d : D)
              for (std::size_t p : P) {
                double v = q[d] - q[p];
                if (v > 0.0) {
                  gq[d] += 2.0 * mu * v;
                  gq[p] -= 2.0 * mu * v;
                }
              }
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += q[i] * gq[i];
            // Adam on theta
            for (std::size_t i = 0; i < n; ++i) {
              double g = q[i] * (gq[i] - dot);
              mom[i] = 0.9 * mom[i] + 0.1 * g;
              vel[i] = 0.999 * vel[i] + 0.001 * g * g;
              double mh = mom[i] / (1.0 - std::pow(0.9, step + 1));
              double vh = vel[i] / (1.0 - std::pow(0.999, step + 1));
              theta[i] -= 0.02 * mh / (std::sqrt(vh) + 1e-12);
            }
          }
        }
        // repair to exact feasibility
        double hi = 0.0, lo = std::numeric_limits<double>::infinity();
        for (std::size_t d : D) hi = std::max(hi, q[d]);
        for (std::size_t p : P) lo = std::min(lo, q[p]);
        if (hi > lo) {
          double c = 0.5 * (hi + lo);
          for (std::size_t d : D) q[d] = std::min(q[d], c);
          for (std::size_t p : P) q[p] = std::max(q[p], c);
          double s = std::accumulate(q.begin(), q.end(), 0.0);
          for (double& v : q) v /= s;
        }
        best = std::min(best, divergence(q, m, alpha));
      }
  return best;
}

double direct_phi(const std::vector<double>& m, std::size_t k, std::size_t k0, double alpha,
                  bool full_pool) {
  std::vector<double> s(m);
  std::sort(s.begin(), s.end(), std::greater<>());
  double best = -std::numeric_limits<double>::infinity();
  const std::size_t lo = full_pool ? k0 : 1;
  for (std::size_t j = lo; j <= k0; ++j)
    for (std::size_t l = lo; l <= k0; ++l) {
      std::vector<double> pool;
      for (std::size_t r = k - k0; r < k - k0 + j; ++r) pool.push_back(s[r]);
      for (std::size_t r = k + k0 - l; r < k + k0; ++r) pool.push_back(s[r]);
      double acc = 0.0, sum = 0.0;
      for (double v : pool) {
        acc += std::pow(v, 1.0 - alpha);
        sum += v;
      }
      double psi = std::pow(acc / static_cast<double>(pool.size()), 1.0 / (1.0 - alpha));
      if (j < k0 && s[k - k0 + j] > psi * (1.0 + 1e-12)) continue;
      if (l < k0 && psi > s[k + k0 - l - 1] * (1.0 + 1e-12)) continue;
      best = std::max(best, static_cast<double>(pool.size()) * psi - sum);
    }
  return best;
}

double dense_alpha_sup(const std::function<double(double)>& f, std::size_t points) {
  const double lo = std::log(1e-6), hi = std::log(999.0);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points; ++i) {
    double u = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    best = std::max(best, f(1.0 + std::exp(u)));
  }
  return best;
}

double corner_search(const rrs::SimpleGradient& g, const std::vector<double>& x, int label,
                     const std::vector<std::size_t>& B, double radius) {
  const std::size_t n = x.size();
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<double> z(x);
    for (std::size_t i = 0; i < n; ++i) z[i] += (mask >> i & 1) ? radius : -radius;
    best = std::max(best, g.objective(z, label, B));
  }
  return best;
}

double ks_normal(std::vector<double> sample, double mu, double sd) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double cdf = 0.5 * std::erfc(-(sample[i] - mu) / (sd * std::sqrt(2.0)));
    d = std::max({d, std::abs(cdf - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - cdf)});
  }
  return d;
}

std::vector<double> random_simplex(std::size_t n, std::uint64_t seed, double floor) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> m(n);
  double s = 0.0;
  for (double& v : m) s += (v = e(rng) + floor);
  for (double& v : m) v /= s;
  return m;
}

}  // namespace oracle
