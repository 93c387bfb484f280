#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rrs/attack.hpp"
#include "rrs/errors.hpp"
#include "rrs/scoring.hpp"

namespace rrs {
namespace {

const double kInf = std::numeric_limits<double>::infinity();

TEST(ProjectBall, Examples) {
  EXPECT_EQ(project_ball({0.1, 0.2}, {0.0, 0.0}, 2.0, 1.0), (std::vector<double>{0.1, 0.2}));
  auto p = project_ball({3.0, 4.0}, {0.0, 0.0}, 2.0, 1.0);
  EXPECT_NEAR(p[0], 0.6, 1e-15);
  EXPECT_NEAR(p[1], 0.8, 1e-15);
  EXPECT_EQ(project_ball({2.0, -0.5}, {0.0, 0.0}, kInf, 1.0), (std::vector<double>{1.0, -0.5}));
  EXPECT_EQ(project_ball({2.0, -0.5}, {0.3, 0.1}, 2.0, 0.0), (std::vector<double>{0.3, 0.1}));
  EXPECT_THROW(project_ball({1.0}, {0.0}, 2.0, -1.0), DomainError);
}

TEST(ProjectBall, LandsInsideBall) {
  for (double d : {1.0, 1.5, 2.0, 3.0, kInf}) {
    auto z = oracle::random_simplex(10, 3);
    for (double& v : z) v *= 40;
    std::vector<double> x(10, 0.25);
    auto p = project_ball(z, x, d, 0.3);
    std::vector<double> diff(10);
    for (std::size_t i = 0; i < 10; ++i) diff[i] = p[i] - x[i];
    EXPECT_LE(norm_d(diff, d), 0.3 + 1e-12) << d;
  }
}

TEST(Attack, LinearModelIsFixedPoint) {
  auto model = TinyModel::linear({3, 3, 1}, 2, 1);
  SimpleGradient g(model);
  Image img{{3, 3, 1}, std::vector<double>(9, 0.5), 0};
  AttackConfig cfg;
  cfg.k = 3;
  auto r = topk_attack(g, img, cfg);
  EXPECT_EQ(r.x_adv, img.pixels);
  EXPECT_EQ(r.achieved_overlap, 1.0);
}

TEST(Attack, ZeroBudgetReturnsInput) {
  auto model = TinyModel::mlp({3, 3, 1}, 2, {6}, Activation::Tanh, 1);
  SimpleGradient g(model);
  Image img{{3, 3, 1}, std::vector<double>(9, 0.5), 1};
  AttackConfig cfg;
  cfg.k = 2;
  cfg.L = 0.0;
  for (double d : {2.0, kInf}) {
    cfg.d = d;
    auto r = topk_attack(g, img, cfg);
    EXPECT_EQ(r.x_adv, img.pixels);
    EXPECT_EQ(r.achieved_overlap, 1.0);
  }
}

TEST(Attack, BudgetAndArgmaxContracts) {
  for (double d : {2.0, kInf}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto model = TinyModel::mlp({4, 4, 1}, 3, {12}, Activation::Tanh, seed, 2.0);
      SimpleGradient g(model);
      auto px = oracle::random_simplex(16, seed);
      for (double& v : px) v *= 4;
      Image img{{4, 4, 1}, px, 0};
      AttackConfig cfg;
      cfg.k = 4;
      cfg.d = d;
      cfg.L = 0.1;
      cfg.lr = 0.02;
      cfg.iterations = 40;
      auto r = topk_attack(g, img, cfg);
      for (double b : r.budget_trace) EXPECT_LE(b, cfg.L + 1e-9);
      double mx = *std::max_element(r.objective_trace.begin(), r.objective_trace.end());
      auto B = top_k_set(g.attribute(img.pixels, 0), 4);
      EXPECT_EQ(mx, g.objective(r.x_adv, 0, B));
      EXPECT_EQ(r.objective_trace[r.best_iteration], mx);
      EXPECT_GE(mx, r.objective_trace[0]);
    }
  }
}

TEST(Attack, SignStepMovesEveryCoordinateByLr) {
  std::vector<double> a(16, 0.0);
  for (std::size_t i = 0; i < 4; ++i) a[i * 4 + i] = 1.0 + 0.1 * i;
  auto model = TinyModel::quadratic({1, 4, 1}, {a, a});
  SimpleGradient g(model, true);
  Image img{{1, 4, 1}, {0.5, 0.6, 0.7, 0.8}, 0};
  AttackConfig cfg;
  cfg.k = 2;
  cfg.L = 10.0;
  cfg.lr = 0.01;
  cfg.iterations = 1;
  cfg.step = StepRule::Sign;
  auto r = topk_attack(g, img, cfg);
  EXPECT_EQ(r.step_rule, "sign");
  ASSERT_EQ(r.budget_trace.size(), 2u);
  EXPECT_NEAR(r.budget_trace[1], 0.01, 1e-15);
}

TEST(Attack, QuadraticToyBreaksNearTie) {
  // gradients 2 A x tie-break between coordinates 0 and 1
  std::vector<double> a(16, 0.0);
  a[0] = 1.0;
  a[5] = 0.99;
  a[10] = 0.1;
  a[15] = 0.1;
  auto model = TinyModel::quadratic({1, 4, 1}, {a, a});
  SimpleGradient g(model);
  Image img{{1, 4, 1}, {0.3, 0.3, 0.3, 0.3}, 0};
  AttackConfig cfg;
  cfg.k = 1;
  cfg.L = 0.5;
  cfg.lr = 0.05;
  cfg.iterations = 50;
  auto r = topk_attack(g, img, cfg);
  EXPECT_GT(r.objective_trace[r.best_iteration], r.objective_trace[0]);
  EXPECT_NE(top_k_set(g.attribute(r.x_adv, 0), 1), top_k_set(g.attribute(img.pixels, 0), 1));
  double corner = oracle::corner_search(g, img.pixels, 0, {0}, 0.5);
  EXPECT_GE(r.objective_trace[r.best_iteration], corner - 0.05 * std::abs(corner));
}

TEST(Attack, FiniteDifferenceModeTracksAnalytic) {
  auto model = TinyModel::mlp({3, 3, 1}, 2, {6}, Activation::Tanh, 4, 2.0);
  SimpleGradient g(model);
  Image img{{3, 3, 1}, {0.1, 0.9, 0.3, 0.5, 0.2, 0.8, 0.4, 0.6, 0.7}, 1};
  AttackConfig cfg;
  cfg.k = 3;
  cfg.d = 2.0;
  cfg.L = 0.2;
  cfg.lr = 0.05;
  cfg.iterations = 5;
  auto a = topk_attack(g, img, cfg);
  cfg.gradient = GradientMode::FiniteDifference;
  auto f = topk_attack(g, img, cfg);
  for (std::size_t i = 0; i < 9; ++i) EXPECT_NEAR(a.x_adv[i], f.x_adv[i], 1e-5);
}

TEST(Attack, Deterministic) {
  auto model = TinyModel::conv({5, 5, 1}, 2, 3, 3, Activation::Softplus, 2);
  SimpleGradient g(model);
  Image img{{5, 5, 1}, std::vector<double>(25, 0.3), 0};
  AttackConfig cfg;
  cfg.k = 5;
  cfg.iterations = 30;
  cfg.lr = 0.01;
  auto a = topk_attack(g, img, cfg);
  auto b = topk_attack(g, img, cfg);
  EXPECT_EQ(a.x_adv, b.x_adv);
  EXPECT_EQ(a.objective_trace, b.objective_trace);
}

TEST(Attack, EnforceLabelKeepsPrediction) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto model = TinyModel::mlp({3, 3, 1}, 2, {6}, Activation::Tanh, s, 3.0);
    SimpleGradient g(model);
    Image img{{3, 3, 1}, std::vector<double>(9, 0.5), 0};
    img.label = predict(model, img.pixels);
    AttackConfig cfg;
    cfg.k = 3;
    cfg.L = 1.0;
    cfg.lr = 0.1;
    cfg.iterations = 20;
    cfg.enforce_label = true;
    auto r = topk_attack(g, img, cfg);
    EXPECT_EQ(predict(model, r.x_adv), img.label);
    EXPECT_FALSE(r.label_flipped);
  }
}

}  // namespace
}  // namespace rrs
