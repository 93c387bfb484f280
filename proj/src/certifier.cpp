#include "rrs/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rrs/errors.hpp"
#include "rrs/gnd.hpp"
#include "rrs/scoring.hpp"

namespace rrs {

std::size_t k0_for(std::size_t k, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("beta must lie in (0, 1]");
  if (k < 1) throw DomainError("k must be >= 1");
  // 1e-9 absorbs representation error, e.g. (1 - 0.8) * 5 = 0.9999999999999998
  double x = (1.0 - beta) * static_cast<double>(k) + 1e-9;
  return static_cast<std::size_t>(std::floor(x)) + 1;
}

TopKSpec k0_and_boundary(std::size_t k, double beta, std::size_t n) {
  if (k > n) throw DomainError("k must be <= n");
  TopKSpec s;
  s.k = k;
  s.beta = beta;
  s.k0 = k0_for(k, beta);
  s.n = n;
  if (k + s.k0 > n)
    throw InfeasibleSpec("k + k0 = " + std::to_string(k + s.k0) + " exceeds n = " +
                         std::to_string(n));
  return s;
}

int shape_cap(std::size_t n) {
  if (n < 2) throw DomainError("shape selection needs n >= 2");
  return 2 * static_cast<int>(std::ceil(std::log(static_cast<double>(n)) / 2.0));
}

int select_shape(double d_prior, std::size_t n) {
  if (!(d_prior >= 1.0)) throw DomainError("d_prior must be in [1, inf]");
  int cap = shape_cap(n);
  if (d_prior == 1.0) return 1;
  if (d_prior <= cap) return 2 * static_cast<int>(std::ceil(d_prior / 2.0));
  return cap;
}

SortedMap::SortedMap(const std::vector<double>& m) {
  if (m.empty()) throw DomainError("empty map");
  double sum = 0.0;
  for (double x : m) {
    if (!(x > 0.0) || !std::isfinite(x))
      throw DomainError("map entries must be strictly positive and finite");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw DomainError("map must sum to 1 (got " + std::to_string(sum) + ")");
  original_ = m;
  for (double& x : original_) x /= sum;
  order_ = descending_order(original_);
  sorted_.resize(m.size());
  for (std::size_t r = 0; r < m.size(); ++r) sorted_[r] = original_[order_[r]];
}

namespace {

void check_spec(const SortedMap& m, const TopKSpec& spec) {
  if (spec.n != m.size()) throw DomainError("spec was built for a different map size");
  if (spec.k0 < 1 || spec.k0 > spec.k) throw DomainError("invalid k0");
  if (spec.k + spec.k0 > m.size()) throw InfeasibleSpec("k + k0 exceeds n");
}

}  // namespace

PoolSolution solve_pool(const SortedMap& m, const TopKSpec& spec, const RenyiOrder& alpha,
                        PoolMode mode) {
  check_spec(m, spec);
  alpha.validate();
  if (alpha.is_infinity()) throw DomainError("eps_robust is defined for alpha in (1, inf)");

  const auto& s = m.sorted();
  const std::size_t n = s.size();
  const std::size_t k0 = spec.k0;
  const std::size_t a = spec.boundary_begin();  // first demoted rank
  const std::size_t b = spec.k;                 // first promoted rank
  const std::size_t w = 2 * k0;

  // Pooled quantities on the boundary window s[a .. a + w).
  // Power means of order p = 1 - alpha are taken relative to the window
  // minimum, which every pool contains, so e <= 1 and equal entries give psi
  // equal to that minimum exactly.
  const double lo = s[a + w - 1];
  std::vector<double> e(w);
  const bool geo = alpha.is_one_plus();
  const double p = geo ? 0.0 : 1.0 - alpha.value;
  for (std::size_t i = 0; i < w; ++i) {
    const double r = std::log(s[a + i] / lo);
    e[i] = geo ? r : std::exp(p * r);
  }

  // prefix over demoted from the top, suffix over promoted from the bottom
  std::vector<double> pre_e(k0 + 1, 0.0), pre_m(k0 + 1, 0.0);
  std::vector<double> suf_e(k0 + 1, 0.0), suf_m(k0 + 1, 0.0);
  for (std::size_t j = 0; j < k0; ++j) {
    pre_e[j + 1] = pre_e[j] + e[j];
    pre_m[j + 1] = pre_m[j] + s[a + j];
    suf_e[j + 1] = suf_e[j] + e[w - 1 - j];
    suf_m[j + 1] = suf_m[j] + s[a + w - 1 - j];
  }
  double outside = 0.0;
  for (std::size_t r = 0; r < a; ++r) outside += s[r];
  for (std::size_t r = a + w; r < n; ++r) outside += s[r];
  const double total_d = pre_m[k0], total_p = suf_m[k0];

  PoolSolution best;
  best.eps = std::numeric_limits<double>::infinity();
  const std::size_t j_lo = mode == PoolMode::Exact ? 1 : k0;
  for (std::size_t j = j_lo; j <= k0; ++j) {
    for (std::size_t l = j_lo; l <= k0; ++l) {
      const double q = static_cast<double>(j + l);
      double psi;
      if (geo)
        psi = lo * std::exp((pre_e[j] + suf_e[l]) / q);
      else
        psi = lo * std::pow((pre_e[j] + suf_e[l]) / q, 1.0 / p);
      if (j < k0 && s[a + j] > psi * (1.0 + 1e-12)) continue;
      if (l < k0 && psi > s[b + k0 - l - 1] * (1.0 + 1e-12)) continue;
      const double pool_m = pre_m[j] + suf_m[l];
      const double phi = q * psi - pool_m;
      const double eps = -std::log1p(phi);
      if (eps < best.eps) {
        best.eps = eps;
        best.psi = psi;
        best.phi = phi;
        best.z = q * psi + outside + (total_d - pre_m[j]) + (total_p - suf_m[l]);
        best.demoted = j;
        best.promoted = l;
        best.pool_begin_demoted = a;
        best.pool_begin_promoted = b + k0 - l;
      }
    }
  }
  best.eps = std::max(0.0, best.eps);
  return best;
}

double eps_robust(const SortedMap& m, const TopKSpec& spec, const RenyiOrder& alpha) {
  return solve_pool(m, spec, alpha).eps;
}

double eps_robust(const std::vector<double>& m, const TopKSpec& spec, const RenyiOrder& alpha) {
  return eps_robust(SortedMap(m), spec, alpha);
}

WorstCaseSolution worst_case_map(const std::vector<double>& m, const TopKSpec& spec,
                                 const RenyiOrder& alpha) {
  SortedMap sm(m);
  WorstCaseSolution out;
  out.pool = solve_pool(sm, spec, alpha);
  out.m_breve = out.pool.psi;
  out.eps_at_alpha = out.pool.eps;
  out.m_tilde.resize(sm.size());
  for (std::size_t r = 0; r < sm.size(); ++r) {
    double v = out.pool.in_pool(r) ? out.pool.psi : sm.sorted()[r];
    out.m_tilde[sm.order()[r]] = v / out.pool.z;
  }
  return out;
}

std::vector<double> alpha_grid(std::size_t points) {
  std::vector<double> g(points);
  const double lo = std::log(1e-6), hi = std::log(999.0);
  for (std::size_t i = 0; i < points; ++i) {
    double u = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    g[i] = 1.0 + std::exp(u);
  }
  return g;
}

namespace {

struct SupResult {
  double value = 0.0;
  double alpha = 1.0;
  bool at_cap = false;
};

template <class F>
SupResult sup_over_alpha(F f) {
  const auto grid = alpha_grid();
  std::vector<double> vals(grid.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    vals[i] = f(grid[i]);
    if (vals[i] > vals[best]) best = i;
  }
  SupResult r{vals[best], grid[best], best + 1 == grid.size()};
  if (!(vals[best] > 0.0)) return r;

  auto g = [&](double u) { return f(1.0 + std::exp(u)); };
  double lo = std::log(grid[best == 0 ? 0 : best - 1] - 1.0);
  double hi = std::log(grid[std::min(best + 1, grid.size() - 1)] - 1.0);
  const double phi = 0.6180339887498949;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = g(x1), f2 = g(x2);
  while (hi - lo > 1e-7) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = g(x1);
    }
  }
  if (f1 > r.value) r = {f1, 1.0 + std::exp(x1), r.at_cap};
  if (f2 > r.value) r = {f2, 1.0 + std::exp(x2), r.at_cap};
  return r;
}

}  // namespace

AttackBound certified_attack_size(const EpsCurve& eps, double sigma, double d_prior,
                                  std::size_t n) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
  AttackBound out;
  out.d_star = select_shape(d_prior, n);

  if (d_prior == 1.0) {
    auto r = sup_over_alpha([&](double a) {
      return invert_divergence(DivergenceKind::laplace(RenyiOrder::finite(a)),
                               eps(RenyiOrder::finite(a)));
    });
    out.L = sigma * r.value;
    out.alpha_star = RenyiOrder::finite(r.alpha);
    out.eps = eps(out.alpha_star);
    out.sup_at_cap = r.at_cap;
  } else if (d_prior <= 2.0) {
    auto r = sup_over_alpha(
        [&](double a) { return std::sqrt(2.0 * eps(RenyiOrder::finite(a)) / a); });
    out.L = sigma * r.value;
    out.alpha_star = RenyiOrder::finite(r.alpha);
    out.eps = eps(out.alpha_star);
    out.sup_at_cap = r.at_cap;
    if (d_prior == 2.0)
      out.kl_row_L =
          sigma * invert_divergence(DivergenceKind::kl_gnd(2), eps(RenyiOrder::one_plus()));
  } else {
    out.alpha_star = RenyiOrder::one_plus();
    out.eps = eps(out.alpha_star);
    out.dimension_penalty_applied = d_prior > shape_cap(n);
    double t = invert_divergence(DivergenceKind::kl_gnd(out.d_star), out.eps);
    out.L = sigma * (out.dimension_penalty_applied ? std::exp(-1.0) : 1.0) * t;
  }
  return out;
}

namespace {

EpsCurve plug_in_curve(const SortedMap& m, const TopKSpec& spec) {
  return [&m, spec](const RenyiOrder& a) { return eps_robust(m, spec, a); };
}

}  // namespace

RobustnessCertificate certify_max_attack(const SortedMap& m, const TopKSpec& spec, double sigma,
                                         double d_prior) {
  auto c = certify_max_attack_curve(m, spec, sigma, d_prior, plug_in_curve);
  c.eps_lower.reset();
  return c;
}

RobustnessCertificate certify_max_attack_curve(const SortedMap& m, const TopKSpec& spec,
                                               double sigma, double d_prior,
                                               const EpsCurveFactory& curve) {
  check_spec(m, spec);
  auto bound = certified_attack_size(curve(m, spec), sigma, d_prior, m.size());
  RobustnessCertificate c;
  c.mode = CertificateMode::MaxAttackSize;
  c.d_prior = d_prior;
  c.d_star = bound.d_star;
  c.sigma = sigma;
  c.n = m.size();
  c.k = spec.k;
  c.beta = spec.beta;
  c.L = bound.L;
  c.alpha_star = bound.alpha_star;
  c.eps_robust = eps_robust(m, spec, bound.alpha_star);
  c.eps_lower = bound.eps;
  c.dimension_penalty_applied = bound.dimension_penalty_applied;
  c.sup_at_cap = bound.sup_at_cap;
  c.kl_row_L = bound.kl_row_L;
  return c;
}

RobustnessCertificate certify_max_attack(const std::vector<double>& m, const TopKSpec& spec,
                                         double sigma, double d_prior) {
  return certify_max_attack(SortedMap(m), spec, sigma, d_prior);
}

RobustnessCertificate certify_beta(const std::vector<double>& m, std::size_t k, double L,
                                   double sigma, double d_prior) {
  auto c = certify_beta_curve(SortedMap(m), k, L, sigma, d_prior, plug_in_curve);
  c.eps_lower.reset();
  return c;
}

RobustnessCertificate certify_beta_curve(const SortedMap& sm, std::size_t k, double L, double sigma,
                                         double d_prior, const EpsCurveFactory& curve) {
  if (!(L >= 0.0)) throw DomainError("attack size must be >= 0");
  const std::size_t n = sm.size();
  if (k < 1 || k > n) throw DomainError("k out of range");

  RobustnessCertificate best;
  best.mode = CertificateMode::MaxBeta;
  best.d_prior = d_prior;
  best.d_star = select_shape(d_prior, n);
  best.sigma = sigma;
  best.n = n;
  best.k = k;
  best.beta = 0.0;
  best.L = L;
  best.dimension_penalty_applied = d_prior > 2.0 && d_prior > shape_cap(n);

  auto passes = [&](std::size_t j, RobustnessCertificate* out) {
    double beta = static_cast<double>(j) / static_cast<double>(k);
    if (k + k0_for(k, beta) > n) return true;
    auto c = certify_max_attack_curve(sm, k0_and_boundary(k, beta, n), sigma, d_prior, curve);
    if (c.L >= L) {
      if (out) *out = c;
      return true;
    }
    return false;
  };

  // certified L is nonincreasing in beta
  std::size_t lo = 0, hi = k;
  while (lo < hi) {
    std::size_t mid = (lo + hi + 1) / 2;
    if (passes(mid, nullptr))
      lo = mid;
    else
      hi = mid - 1;
  }
  if (lo > 0) {
    RobustnessCertificate c;
    c.alpha_star = RenyiOrder::one_plus();
    bool feasible = k + k0_for(k, static_cast<double>(lo) / k) <= n;
    if (feasible) passes(lo, &c);
    best.beta = static_cast<double>(lo) / static_cast<double>(k);
    best.alpha_star = c.alpha_star;
    best.eps_robust = feasible ? c.eps_robust : 0.0;
    best.sup_at_cap = c.sup_at_cap;
    best.kl_row_L = c.kl_row_L;
    best.eps_lower = c.eps_lower;
  }
  best.mode = CertificateMode::MaxBeta;
  best.L = L;
  return best;
}

}  // namespace rrs
