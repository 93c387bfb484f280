#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rrs/attack.hpp"
#include "rrs/image.hpp"
#include "rrs/model.hpp"

namespace rrs {

struct PointingScore {
  int hard = -1;
  double soft = 0.0;
};

PointingScore pointing_score(const std::vector<double>& map, const std::vector<std::uint8_t>& mask,
                             std::size_t k, double tau = 0.5);

// Procedural image with a rectangular object and a tiny MLP whose first layer
// is more sensitive inside the object.
struct SyntheticSpec {
  Dims dims{8, 8, 1};
  std::size_t n_classes = 3;
  std::vector<std::size_t> hidden{16};
  Activation activation = Activation::Tanh;
  double weight_scale = 1.0;
  double object_gain = 3.0;
};

struct SyntheticCase {
  Image image;
  std::vector<std::uint8_t> mask;
  TinyModel model;
};

SyntheticCase make_synthetic_case(const SyntheticSpec& spec, std::uint64_t seed);

struct SweepSpec {
  std::string axis = "sigma";  // k | sigma | L | T
  std::vector<double> values;
  std::size_t repetitions = 10;
  std::uint64_t seed = 0;

  SyntheticSpec synthetic;
  std::size_t k = 16;
  double sigma = 0.1;
  std::size_t T = 50;
  double L = 8.0 / 256.0;
  double d_prior = std::numeric_limits<double>::infinity();
  double eta = 0.5;
  double k_star = 0.0;  // 0: k
  double lr = 0.5;
  std::size_t attack_iterations = 300;
  double tau = 0.5;

  void validate() const;
  static SweepSpec from_json(const std::string& text);
  static SweepSpec load(const std::string& path);
};

struct SweepRow {
  std::string axis;
  double value = 0.0;
  double beta_exp = 0.0;
  double beta_theory = 0.0;
  double point_hard = 0.0;
  double point_soft = 0.0;
  double seconds = 0.0;
  std::size_t cells = 0;
  std::size_t failed_cells = 0;
};

struct SweepCell {
  double beta_exp = 0.0;
  double beta_theory = 0.0;
  PointingScore pointing;
  double seconds = 0.0;
  bool ok = false;
  std::string error;
};

// One (axis value, repetition) cell.
SweepCell run_sweep_cell(const SweepSpec& spec, double value, std::size_t repetition);

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads = 1,
                                std::vector<std::vector<SweepCell>>* cells = nullptr);

std::string sweep_csv(const std::vector<SweepRow>& rows, bool timing = false);

}  // namespace rrs
