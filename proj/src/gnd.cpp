#include "rrs/gnd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "rrs/errors.hpp"

namespace rrs {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

double log_add_exp(double a, double b) {
  double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

}  // namespace

void GndParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ParameterError("GND sigma must be positive and finite");
  if (!std::isfinite(mu)) throw ParameterError("GND mu must be finite");
  if (!(shape_b == 1 || (shape_b >= 2 && shape_b % 2 == 0)))
    throw ParameterError("GND shape must be 1 or an even integer >= 2, got " +
                         std::to_string(shape_b));
}

double GndParams::sigma_star() const {
  double b = shape_b;
  return std::sqrt(boost::math::tgamma_ratio(1.0 / b, 3.0 / b)) * sigma;
}

void sample_noise_into(const GndParams& p, Rng& rng, double* out, std::size_t n) {
  const double b = p.shape_b;
  const double s = p.sigma_star();
  std::gamma_distribution<double> gamma(1.0 / b, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    double g = gamma(rng);
    double mag = p.shape_b == 1 ? g : (p.shape_b == 2 ? std::sqrt(g) : std::pow(g, 1.0 / b));
    double sign = (rng() >> 63) ? 1.0 : -1.0;
    out[i] = p.mu + sign * s * mag;
  }
}

std::vector<double> sample_noise(const GndParams& p, std::size_t n, std::uint64_t seed) {
  p.validate();
  if (n == 0) throw DomainError("sample_noise needs n >= 1");
  std::vector<double> out(n);
  Rng rng = make_rng(seed, 0);
  sample_noise_into(p, rng, out.data(), n);
  return out;
}

double log_pdf(const GndParams& p, double x) {
  const double b = p.shape_b;
  const double s = p.sigma_star();
  double z = std::abs(x - p.mu) / s;
  return std::log(b / (2.0 * s)) - std::lgamma(1.0 / b) - std::pow(z, b);
}

double pdf(const GndParams& p, double x) { return std::exp(log_pdf(p, x)); }

double eps_alpha_laplace(double t, double alpha) {
  return eps_alpha_laplace(t, RenyiOrder::finite(alpha));
}

double eps_alpha_laplace(double t, const RenyiOrder& alpha) {
  if (!(t >= 0.0)) throw DomainError("eps_alpha_laplace: t must be >= 0");
  alpha.validate();
  if (t == 0.0) return 0.0;
  const double u = kSqrt2 * t;
  if (alpha.is_infinity()) return u;
  if (alpha.is_one_plus()) return u + std::expm1(-u);
  const double a = alpha.value;
  const double ca = a / (2.0 * a - 1.0);
  const double cb = (a - 1.0) / (2.0 * a - 1.0);
  double inner;
  if ((a - 1.0) * u < 30.0) {
    inner = std::log1p(ca * std::expm1((a - 1.0) * u) + cb * std::expm1(-a * u));
  } else {
    double la = -std::log1p((a - 1.0) / a);
    double lb = std::log(cb);
    inner = log_add_exp(la + (a - 1.0) * u, lb - a * u);
  }
  return std::max(0.0, inner / (a - 1.0));
}

double eps_gaussian(double t, double alpha) {
  if (!(t >= 0.0)) throw DomainError("eps_gaussian: t must be >= 0");
  if (!(alpha >= 1.0)) throw DomainError("eps_gaussian: alpha must be >= 1");
  return alpha * t * t / 2.0;
}

double eps_kl_gnd(int shape_b, double t) {
  if (shape_b < 2 || shape_b % 2 != 0)
    throw DomainError("eps_kl_gnd: shape must be an even integer >= 2");
  if (!(t >= 0.0)) throw DomainError("eps_kl_gnd: t must be >= 0");
  if (t == 0.0) return 0.0;
  const double b = shape_b;
  const double r = t * std::sqrt(boost::math::tgamma_ratio(3.0 / b, 1.0 / b));
  double sum = 0.0;
  for (int i = 1; 2 * i <= shape_b; ++i) {
    double c = boost::math::binomial_coefficient<double>(shape_b, 2 * i);
    double g = boost::math::tgamma_ratio((b + 1.0 - 2.0 * i) / b, 1.0 / b);
    sum += c * std::pow(r, 2 * i) * g;
  }
  return sum;
}

double DivergenceKind::forward(double t) const {
  switch (family) {
    case Family::Laplace:
      return eps_alpha_laplace(t, alpha);
    case Family::Gaussian:
      return eps_gaussian(t, alpha.is_one_plus() ? 1.0 : alpha.value);
    case Family::KlGnd:
      return eps_kl_gnd(shape_b, t);
  }
  return 0.0;
}

double invert_divergence(const DivergenceKind& kind, double eps) {
  if (!(eps >= 0.0)) throw DomainError("invert_divergence: eps must be >= 0");
  if (eps == 0.0) return 0.0;
  if (std::isinf(eps)) return eps;
  double lo = 0.0, hi = 1.0;
  while (kind.forward(hi) < eps) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw NumericError("invert_divergence: no bracket for eps");
  }
  for (int it = 0; it < 200 && hi - lo > 4.0 * 2.220446049250313e-16 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (kind.forward(mid) < eps)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;

struct LogDensity {
  double mu, s, b, c;
  explicit LogDensity(const GndParams& p)
      : mu(p.mu), s(p.sigma_star()), b(p.shape_b),
        c(std::log(b / (2.0 * s)) - std::lgamma(1.0 / b)) {}
  double operator()(double x) const { return c - std::pow(std::abs(x - mu) / s, b); }
};

template <class F>
double integrate_pieces(F f, std::vector<double> cuts, const std::string& what, double& err_total,
                        int& pieces) {
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0, l1_total = 0.0, err_here = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double err = 0.0, l1 = 0.0;
    double v = Kronrod::integrate(f, cuts[i], cuts[i + 1], 15, 1e-11, &err, &l1);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << what << ": non-finite quadrature on [" << cuts[i] << ", " << cuts[i + 1] << "]";
      throw NumericError(os.str());
    }
    total += v;
    l1_total += l1;
    err_here += err;
    ++pieces;
  }
  if (err_here > 1e-9 * std::max(l1_total, 1e-300)) {
    std::ostringstream os;
    os << what << ": quadrature did not converge, estimate " << total << ", error " << err_here
       << ", |f| mass " << l1_total;
    throw NumericError(os.str());
  }
  err_total += err_here;
  return total;
}

}  // namespace

double numeric_renyi_divergence(const GndParams& p0, double shift_L, const RenyiOrder& alpha,
                                QuadratureInfo* info) {
  GndParams p = p0;
  p.mu = 0.0;
  p.validate();
  alpha.validate();
  if (!(shift_L >= 0.0)) throw DomainError("numeric_renyi_divergence: shift must be >= 0");
  GndParams q = p;
  q.mu = shift_L;
  if (info) *info = QuadratureInfo{};
  if (shift_L == 0.0) return 0.0;

  const double s = p.sigma_star();
  const double b = p.shape_b;
  double err = 0.0;
  int pieces = 0;

  if (alpha.is_infinity()) {
    if (p.shape_b != 1)
      throw DomainError("order-infinity divergence is unbounded for shape > 1");
    return shift_L / s;
  }

  if (alpha.is_one_plus()) {
    const double R = s * std::max(20.0, std::pow(60.0, 1.0 / b));
    const LogDensity lp(p), lq(q);
    auto f = [&](double x) {
      double a = lp(x);
      return std::exp(a) * (a - lq(x));
    };
    double v = integrate_pieces(f, {-R, 0.0, shift_L, shift_L + R}, "KL", err, pieces);
    if (info) *info = {v, err, pieces};
    return v;
  }

  const double a = alpha.value;
  const LogDensity lp(p), lq(q);
  auto h = [&](double x) { return a * lp(x) + (1.0 - a) * lq(x); };
  // The log-integrand is unimodal; its stationary point solves
  // a |x|^(b-1) sgn(x) = (a-1) |x-L|^(b-1) sgn(x-L).
  double peak = 0.0;
  if (p.shape_b > 1) {
    double c = std::pow((a - 1.0) / a, 1.0 / (b - 1.0));
    peak = -c * shift_L / (1.0 - c);
  }
  const double hmax = h(peak);
  double lo = std::min(peak, 0.0) - s, hi = std::max(peak, shift_L) + s;
  for (double step = s; h(lo) - hmax > -60.0; step *= 2.0) lo -= step;
  for (double step = s; h(hi) - hmax > -60.0; step *= 2.0) hi += step;
  auto f = [&](double x) { return std::exp(h(x) - hmax); };
  double I = integrate_pieces(f, {lo, peak, 0.0, shift_L, hi}, "Renyi", err, pieces);
  double v = (hmax + std::log(I)) / (a - 1.0);
  if (info) *info = {v, err, pieces};
  return v;
}

double numeric_pdf_mass(const GndParams& p) {
  p.validate();
  const double s = p.sigma_star();
  const double R = s * std::max(20.0, std::pow(60.0, 1.0 / p.shape_b));
  double err = 0.0;
  int pieces = 0;
  const LogDensity lp(p);
  auto f = [&](double x) { return std::exp(lp(x)); };
  return integrate_pieces(f, {p.mu - R, p.mu, p.mu + R}, "pdf mass", err, pieces);
}

}  // namespace rrs
