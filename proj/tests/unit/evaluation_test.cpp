#include <cmath>

#include <gtest/gtest.h>

#include "rrs/errors.hpp"
#include "rrs/evaluation.hpp"

namespace rrs {
namespace {

TEST(Pointing, Examples) {
  std::vector<double> map{0.9, 0.8, 0.1, 0.2};
  auto all = pointing_score(map, {1, 1, 0, 0}, 2);
  EXPECT_EQ(all.hard, 1);
  EXPECT_EQ(all.soft, 1.0);
  auto none = pointing_score(map, {0, 0, 1, 1}, 2);
  EXPECT_EQ(none.hard, -1);
  EXPECT_EQ(none.soft, 0.0);
  auto half = pointing_score(map, {1, 0, 1, 0}, 2, 0.5);
  EXPECT_EQ(half.hard, 1);
  EXPECT_EQ(half.soft, 0.5);
  EXPECT_EQ(pointing_score(map, {1, 0, 1, 0}, 2, 0.75).hard, -1);
}

TEST(Pointing, Errors) {
  EXPECT_THROW(pointing_score({1, 2}, {0, 0}, 1), DomainError);
  EXPECT_THROW(pointing_score({1, 2}, {1}, 1), DomainError);
  EXPECT_THROW(pointing_score({1, 2}, {1, 0}, 3), DomainError);
}

TEST(Pointing, MonotoneRescalingInvariant) {
  std::vector<double> map{0.3, 0.1, 0.7, 0.2, 0.5, 0.05};
  std::vector<std::uint8_t> mask{0, 1, 1, 0, 1, 0};
  std::vector<double> t(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) t[i] = std::exp(5 * map[i]) - 3;
  for (std::size_t k = 1; k <= 6; ++k)
    EXPECT_EQ(pointing_score(map, mask, k).soft, pointing_score(t, mask, k).soft);
}

TEST(Synthetic, CaseIsConsistent) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto c = make_synthetic_case({}, s);
    EXPECT_EQ(c.image.dims, (Dims{8, 8, 1}));
    EXPECT_EQ(c.mask.size(), 64u);
    EXPECT_GT(std::count(c.mask.begin(), c.mask.end(), 1), 0);
    EXPECT_EQ(c.image.label, predict(c.model, c.image.pixels));
    for (double p : c.image.pixels) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
  }
  auto a = make_synthetic_case({}, 4), b = make_synthetic_case({}, 4);
  EXPECT_EQ(a.image.pixels, b.image.pixels);
  EXPECT_EQ(a.model.to_json(), b.model.to_json());
}

SweepSpec small_spec() {
  SweepSpec s;
  s.axis = "sigma";
  s.values = {0.05, 0.3};
  s.repetitions = 3;
  s.seed = 5;
  s.T = 20;
  s.attack_iterations = 20;
  return s;
}

TEST(Sweep, ReproducibleAndThreadIndependent) {
  auto spec = small_spec();
  auto a = sweep_csv(run_sweep(spec, 1));
  auto b = sweep_csv(run_sweep(spec, 1));
  auto c = sweep_csv(run_sweep(spec, 4));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_EQ(a.substr(0, a.find('\n')), "axis,value,beta_exp,beta_theory,point_hard,point_soft,seconds");
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 3);
}

TEST(Sweep, CellsStayInRange) {
  std::vector<std::vector<SweepCell>> cells;
  auto rows = run_sweep(small_spec(), 2, &cells);
  ASSERT_EQ(rows.size(), 2u);
  ASSERT_EQ(cells.size(), 2u);
  for (const auto& row : cells)
    for (const auto& c : row) {
      EXPECT_TRUE(c.ok) << c.error;
      EXPECT_GE(c.beta_exp, 0.0);
      EXPECT_LE(c.beta_exp, 1.0);
      EXPECT_GE(c.beta_theory, 0.0);
      EXPECT_LE(c.beta_theory, 1.0);
    }
  EXPECT_LE(rows[0].beta_theory, rows[1].beta_theory);
}

TEST(Sweep, SpecParsingAndValidation) {
  auto s = SweepSpec::from_json(R"({"axis": "L", "values": [0.01, 0.02], "repetitions": 2, "seed": 3})");
  EXPECT_EQ(s.axis, "L");
  EXPECT_EQ(s.values.size(), 2u);
  EXPECT_EQ(s.repetitions, 2u);
  EXPECT_THROW(SweepSpec::from_json(R"({"axis": "eta", "values": [1]})"), ParameterError);
  EXPECT_THROW(SweepSpec::from_json(R"({"axis": "k", "values": []})"), ParameterError);
  EXPECT_THROW(SweepSpec::from_json(R"({"axis": "k", "values": [2], "repetitions": 0})"), ParameterError);
  EXPECT_THROW(SweepSpec::from_json("not json"), ParameterError);
}

TEST(Sweep, OutOfRangeAxisValueRejectedUpFront) {
  auto spec = small_spec();
  spec.axis = "k";
  spec.values = {4, 70};  // n = 64
  EXPECT_THROW(run_sweep(spec, 1), ParameterError);
}

}  // namespace
}  // namespace rrs
