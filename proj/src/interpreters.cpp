#include "rrs/interpreters.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "rrs/errors.hpp"
#include "rrs/rrsm.hpp"

namespace rrs {

SimpleGradient::SimpleGradient(TinyModel model, bool signed_attribution)
    : model_(std::move(model)), signed_(signed_attribution) {
  model_.validate();
}

std::vector<double> SimpleGradient::attribute(const std::vector<double>& x, int label) const {
  auto g = score_gradient(model_, x, label);
  if (!signed_)
    for (double& v : g) v = std::abs(v);
  return g;
}

double SimpleGradient::objective(const std::vector<double>& z, int label,
                                 const std::vector<std::size_t>& B) const {
  auto g = attribute(z, label);
  double d = 0.0;
  for (std::size_t i : B) d -= g.at(i);
  return d;
}

double SimpleGradient::objective_gradient(const std::vector<double>& z, int label,
                                          const std::vector<std::size_t>& B,
                                          std::vector<double>& grad, GradientMode mode,
                                          double fd_step) const {
  const std::size_t n = z.size();
  if (mode == GradientMode::FiniteDifference) {
    double h = fd_step;
    if (!(h > 0.0)) {
      auto [lo, hi] = std::minmax_element(z.begin(), z.end());
      double range = *hi - *lo;
      h = 1e-4 * (range > 0.0 ? range : 1.0);
    }
    grad.assign(n, 0.0);
    std::vector<double> zp = z;
    for (std::size_t j = 0; j < n; ++j) {
      zp[j] = z[j] + h;
      double up = objective(zp, label, B);
      zp[j] = z[j] - h;
      double dn = objective(zp, label, B);
      zp[j] = z[j];
      grad[j] = (up - dn) / (2.0 * h);
    }
    return objective(z, label, B);
  }

  // dD/dz = -H u with u_i = d|grad_i|/d grad_i on B; H is symmetric.
  std::vector<double> g0 = score_gradient(model_, z, label);
  std::vector<double> u(n, 0.0);
  double d = 0.0;
  for (std::size_t i : B) {
    if (i >= n) throw DomainError("objective index out of range");
    double s = signed_ ? 1.0 : (g0[i] > 0.0 ? 1.0 : (g0[i] < 0.0 ? -1.0 : 0.0));
    u[i] = s;
    d -= signed_ ? g0[i] : std::abs(g0[i]);
  }
  std::vector<double> g, hu;
  score_gradient_hvp(model_, z, label, u, g, hu);
  grad.resize(n);
  for (std::size_t j = 0; j < n; ++j) grad[j] = -hu[j];
  return d;
}

std::vector<double> simple_gradient(const TinyModel& model, const Image& image, int label,
                                    bool signed_attribution) {
  if (!(image.dims == model.input)) throw DimMismatch("image dims do not match the model");
  return SimpleGradient(model, signed_attribution).attribute(image.pixels, label);
}

SaliencyMap load_saliency(const std::string& directory, const std::string& image_id) {
  SaliencyMap s;
  auto path = (std::filesystem::path(directory) / (image_id + ".rrsm")).string();
  read_map(path, s.dims, s.values);
  return s;
}

SaliencyMap load_saliency(const std::string& directory, const std::string& image_id,
                          const Dims& expected) {
  SaliencyMap s = load_saliency(directory, image_id);
  if (!(s.dims == expected))
    throw DimMismatch("saliency map " + image_id + " has dims " + std::to_string(s.dims.height) +
                      "x" + std::to_string(s.dims.width) + "x" + std::to_string(s.dims.channels) +
                      ", expected " + std::to_string(expected.height) + "x" +
                      std::to_string(expected.width) + "x" + std::to_string(expected.channels));
  return s;
}

}  // namespace rrs
