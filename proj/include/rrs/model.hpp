#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rrs/dual.hpp"
#include "rrs/image.hpp"

namespace rrs {

enum class Architecture { Linear, Mlp, Conv, Quadratic };
enum class Activation { Tanh, Softplus };

struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weight;  // out x in, row-major
  std::vector<double> bias;    // out
};

// Small differentiable classifiers standing in for a real backbone.
//   linear:    s = W x + b
//   mlp:       hidden dense layers with activation, then a dense readout
//   conv:      one valid convolution (filters x kernel x kernel x channels),
//              activation, then a dense readout
//   quadratic: s_c = x^T A_c x
struct TinyModel {
  Architecture architecture = Architecture::Linear;
  Activation activation = Activation::Tanh;
  Dims input;
  std::size_t n_classes = 2;

  std::vector<DenseLayer> layers;  // linear: 1, mlp: hidden + readout, conv: readout
  std::size_t filters = 0;
  std::size_t kernel = 0;
  std::vector<double> conv_weight;  // filters x kernel x kernel x channels
  std::vector<double> conv_bias;    // filters
  std::vector<std::vector<double>> quad;  // n_classes matrices, n x n row-major

  std::size_t input_size() const { return input.size(); }
  void validate() const;

  static TinyModel linear(Dims input, std::size_t n_classes, std::uint64_t seed,
                          double scale = 1.0);
  static TinyModel mlp(Dims input, std::size_t n_classes, const std::vector<std::size_t>& hidden,
                       Activation act, std::uint64_t seed, double scale = 1.0);
  static TinyModel conv(Dims input, std::size_t n_classes, std::size_t filters,
                        std::size_t kernel, Activation act, std::uint64_t seed,
                        double scale = 1.0);
  static TinyModel quadratic(Dims input, std::vector<std::vector<double>> matrices);

  std::string to_json() const;
  static TinyModel from_json(const std::string& text);
  void save(const std::string& path) const;
  static TinyModel load(const std::string& path);
};

std::vector<double> forward(const TinyModel& m, const std::vector<double>& x);
std::vector<double> forward(const TinyModel& m, const Image& image);
int predict(const TinyModel& m, const std::vector<double>& x);

// d s_label / d x.
std::vector<double> score_gradient(const TinyModel& m, const std::vector<double>& x, int label);

// Value and directional derivative of the score gradient along `direction`,
// i.e. (grad, H direction).
void score_gradient_hvp(const TinyModel& m, const std::vector<double>& x, int label,
                        const std::vector<double>& direction, std::vector<double>& grad,
                        std::vector<double>& hvp);

}  // namespace rrs
