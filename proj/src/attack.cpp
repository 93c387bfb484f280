#include "rrs/attack.hpp"

#include <algorithm>
#include <cmath>

#include "rrs/errors.hpp"
#include "rrs/scoring.hpp"

namespace rrs {

double norm_d(const std::vector<double>& v, double d) {
  if (!(d >= 1.0)) throw DomainError("norm order must be >= 1");
  double mx = 0.0;
  for (double x : v) mx = std::max(mx, std::abs(x));
  if (std::isinf(d) || mx == 0.0) return mx;
  double s = 0.0;
  if (d == 1.0) {
    for (double x : v) s += std::abs(x);
    return s;
  }
  if (d == 2.0) {
    for (double x : v) s += (x / mx) * (x / mx);
    return mx * std::sqrt(s);
  }
  for (double x : v) s += std::pow(std::abs(x) / mx, d);
  return mx * std::pow(s, 1.0 / d);
}

std::vector<double> project_ball(const std::vector<double>& z, const std::vector<double>& x,
                                 double d, double radius) {
  if (z.size() != x.size()) throw DomainError("project_ball: size mismatch");
  if (!(radius >= 0.0)) throw DomainError("project_ball: radius must be >= 0");
  if (radius == 0.0) return x;
  const std::size_t n = z.size();
  if (std::isinf(d)) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::clamp(z[i], x[i] - radius, x[i] + radius);
    return out;
  }
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = z[i] - x[i];
  double nrm = norm_d(diff, d);
  if (nrm <= radius) return z;
  std::vector<double> out(n);
  const double scale = radius / nrm;
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + scale * diff[i];
  return out;
}

AttackResult topk_attack(const SimpleGradient& g, const Image& image, const AttackConfig& cfg) {
  const std::vector<double>& x = image.pixels;
  const std::size_t n = x.size();
  if (g.input_size() != n) throw DimMismatch("model does not accept this image size");
  if (!(cfg.L >= 0.0)) throw DomainError("attack budget must be >= 0");
  if (!(cfg.lr > 0.0)) throw DomainError("learning rate must be positive");
  if (cfg.iterations < 1) throw DomainError("attack needs at least one iteration");
  if (cfg.k < 1 || cfg.k > n) throw DomainError("k out of range");
  norm_d({0.0}, cfg.d);

  const int label = image.label;
  const auto g0 = g.attribute(x, label);
  const auto B = top_k_set(g0, cfg.k);
  const bool sign = cfg.step == StepRule::Sign || (cfg.step == StepRule::Auto && std::isinf(cfg.d));
  const int clean_pred = predict(g.model(), x);

  AttackResult r;
  r.step_rule = sign ? "sign" : "l2";
  std::vector<double> z = x, grad(n), best = x;
  double best_d = g.objective(x, label, B);
  r.objective_trace.push_back(best_d);
  r.budget_trace.push_back(0.0);

  for (std::size_t t = 1; t <= cfg.iterations; ++t) {
    g.objective_gradient(z, label, B, grad, cfg.gradient, cfg.fd_step);
    std::vector<double> step(n, 0.0);
    if (sign) {
      for (std::size_t i = 0; i < n; ++i)
        step[i] = grad[i] > 0.0 ? cfg.lr : (grad[i] < 0.0 ? -cfg.lr : 0.0);
    } else {
      double nrm = norm_d(grad, 2.0);
      if (nrm > 0.0)
        for (std::size_t i = 0; i < n; ++i) step[i] = cfg.lr * grad[i] / nrm;
    }
    if (std::all_of(step.begin(), step.end(), [](double s) { return s == 0.0; })) break;

    std::vector<double> cand(n);
    for (std::size_t i = 0; i < n; ++i) cand[i] = z[i] + step[i];
    cand = project_ball(cand, x, cfg.d, cfg.L);
    if (cfg.enforce_label && predict(g.model(), cand) != clean_pred) {
      ++r.rejected_steps;
      break;
    }
    if (cand == z) break;
    z = std::move(cand);
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = z[i] - x[i];
    r.budget_trace.push_back(norm_d(diff, cfg.d));
    double dz = g.objective(z, label, B);
    r.objective_trace.push_back(dz);
    r.iterations_run = t;
    if (dz > best_d) {
      best_d = dz;
      best = z;
      r.best_iteration = t;
    }
  }
  r.x_adv = std::move(best);
  r.achieved_overlap = top_k_overlap(g0, g.attribute(r.x_adv, label), cfg.k);
  r.label_flipped = predict(g.model(), r.x_adv) != clean_pred;
  return r;
}

}  // namespace rrs
