#include <cmath>
#include <cstdio>
#include <filesystem>

#include <gtest/gtest.h>

#include "kt/datasets.hpp"
#include "kt/eval.hpp"

using namespace kt;

TEST(Generate, ShapesAndLabels) {
  for (auto kind : {DatasetKind::moons, DatasetKind::circles, DatasetKind::banana,
                    DatasetKind::blobs, DatasetKind::linear_margin}) {
    auto ds = generate(kind, 201, 0.1, 3);
    EXPECT_EQ(ds.size(), 201u);
    EXPECT_EQ(ds.d, 2);
    EXPECT_NO_THROW(ds.validate());
    int pos = 0;
    for (int y : ds.y) pos += y == 1;
    EXPECT_EQ(pos, 101);
    EXPECT_EQ(ds.name, to_string(kind));
  }
}

TEST(Generate, DeterministicPerSeed) {
  EXPECT_EQ(generate(DatasetKind::banana, 100, 0.2, 9), generate(DatasetKind::banana, 100, 0.2, 9));
  EXPECT_FALSE(generate(DatasetKind::banana, 100, 0.2, 9) ==
               generate(DatasetKind::banana, 100, 0.2, 10));
}

TEST(Generate, NoiselessGeometry) {
  auto c = generate(DatasetKind::circles, 100, 0.0, 1);
  for (std::size_t i = 0; i < c.size(); ++i)
    EXPECT_NEAR(c.x[i].norm(), c.y[i] == 1 ? 0.5 : 1.0, 1e-15);
  auto m = generate(DatasetKind::moons, 100, 0.0, 1);
  // first outer point sits at angle 0 of the upper arc, shifted by (-0.5, -0.25)
  EXPECT_DOUBLE_EQ(m.x[0][0], 0.5);
  EXPECT_DOUBLE_EQ(m.x[0][1], -0.25);
  EXPECT_EQ(m.y[0], -1);
}

TEST(Generate, LinearMarginIsSeparable) {
  auto ds = generate(DatasetKind::linear_margin, 300, 0.0, 4);
  LearnerConfig cfg;
  cfg.loss_tol = 0.0;
  auto res = fit_detailed(ds.x, ds.y, KernelSpec::linear(), cfg);
  EXPECT_EQ(perceptron_risk(res.model, ds), 0.0);
}

TEST(Generate, RejectsBadArguments) {
  EXPECT_THROW(generate(DatasetKind::moons, 1, 0.1, 0), InvalidArgument);
  EXPECT_THROW(generate(DatasetKind::moons, 10, -0.1, 0), InvalidArgument);
  EXPECT_THROW(generate("spirals", 10, 0.1, 0), InvalidArgument);
}

TEST(Reference, SeparableHasZeroRisk) {
  auto ds = generate(DatasetKind::blobs, 100, 0.0, 2);
  auto ref = train_reference(ds, KernelSpec::gaussian(0.9), LearnerConfig{});
  EXPECT_TRUE(ref.converged);
  EXPECT_LE(ref.err_star, 1e-6);
  EXPECT_NEAR(rkhs_norm(ref.model), 1.0, 1e-9);
  EXPECT_THROW(train_reference(ds, KernelSpec::polynomial(2), LearnerConfig{}), InvalidArgument);
}

TEST(Reference, OverlappingHasPositiveRisk) {
  auto ds = generate(DatasetKind::banana, 200, 0.3, 2);
  LearnerConfig cfg;
  cfg.max_iters = 3000;
  auto ref = train_reference(ds, KernelSpec::gaussian(0.9), cfg);
  EXPECT_GT(ref.err_star, 0.0);
  EXPECT_NEAR(ref.err_star, perceptron_risk(ref.model, ds), 1e-15);
}

TEST(Csv, RoundTripIsExact) {
  auto ds = generate(DatasetKind::moons, 50, 0.1, 5);
  auto back = parse_csv(format_csv(ds));
  EXPECT_EQ(back, ds);
  const auto path = (std::filesystem::temp_directory_path() / "kt_csv_roundtrip.csv").string();
  save_csv(ds, path);
  EXPECT_EQ(load_csv(path), ds);
  std::remove(path.c_str());
}

TEST(Csv, ZeroOneLabelsAndTagColumn) {
  auto ds = parse_csv("x1,x2,y,tag\n0.5,1,0,a\n-1,2e-3,1,b\n");
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.y[0], -1);
  EXPECT_EQ(ds.y[1], 1);
  EXPECT_DOUBLE_EQ(ds.x[1][1], 0.002);
  auto ones = parse_csv("x1,y\n1,1\n2,1\n");
  EXPECT_EQ(ones.y, (std::vector<int>{1, 1}));
}

TEST(Csv, ParseErrorsCarryLineNumber) {
  try {
    parse_csv("x1,x2,y\n1,2,1\n1,abc,-1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    parse_csv("x1,x2,y\n1,2,1\n\n1,2\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  EXPECT_THROW(parse_csv("x1,x2,y\n1,2,3\n"), ParseError);
  EXPECT_THROW(parse_csv("a,b,y\n1,2,1\n"), ParseError);
  EXPECT_THROW(parse_csv(""), ParseError);
}
