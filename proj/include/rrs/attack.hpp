#pragma once

#include <limits>
#include <string>
#include <vector>

#include "rrs/image.hpp"
#include "rrs/interpreters.hpp"

namespace rrs {

enum class StepRule {
  Auto,    // sign steps for d = inf, l2-normalized otherwise
  Sign,
  L2Norm,
};

struct AttackConfig {
  std::size_t k = 1;
  double L = 8.0 / 256.0;
  double d = std::numeric_limits<double>::infinity();
  double lr = 0.5;
  std::size_t iterations = 300;
  StepRule step = StepRule::Auto;
  GradientMode gradient = GradientMode::Analytic;
  double fd_step = 0.0;  // 0: 1e-4 times the input's dynamic range
  bool enforce_label = false;
};

struct AttackResult {
  std::vector<double> x_adv;
  std::vector<double> objective_trace;  // D at x^0 .. x^iterations_run
  std::vector<double> budget_trace;     // ||x^t - x||_d
  double achieved_overlap = 1.0;
  std::size_t iterations_run = 0;
  std::size_t best_iteration = 0;
  std::size_t rejected_steps = 0;
  bool label_flipped = false;
  std::string step_rule;
};

double norm_d(const std::vector<double>& v, double d);

// Projection onto the l_d ball around x: radial scaling for finite d,
// coordinate clipping for d = inf.
std::vector<double> project_ball(const std::vector<double>& z, const std::vector<double>& x,
                                 double d, double radius);

// Iterative top-k attack: B is the clean top-k set and each step ascends
// D(z) = -sum_{i in B} g(z)_i inside the budget ball. Returns the iterate with
// the largest D (earliest on ties).
AttackResult topk_attack(const SimpleGradient& g, const Image& image, const AttackConfig& cfg);

}  // namespace rrs
