#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kt/datasets.hpp"
#include "kt/eval.hpp"
#include "kt/learner.hpp"
#include "kt/teacher.hpp"

using namespace kt;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST(DecisionValue, Examples) {
  DualModel single{KernelSpec::gaussian(0.9), {vec({0.1, 0.2})}, vec({1})};
  EXPECT_DOUBLE_EQ(single.decision_value(vec({0.1, 0.2})), 1.0);
  auto lin = make_primal(KernelSpec::linear(), 3, vec({-3, 3, 5}));
  EXPECT_NEAR(lin.decision_value(vec({-0.46, 0.46, 0.76})), 6.56, 1e-12);
  EXPECT_THROW(lin.decision_value(vec({1, 2})), InvalidArgument);
  EXPECT_THROW(single.decision_value(vec({1, 2, 3})), InvalidArgument);
}

TEST(DecisionValue, DualMatchesPrimal) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (const auto& spec : {KernelSpec::polynomial(3), KernelSpec::truncated_gaussian(0.9, 7)}) {
    DualModel m{spec, {}, Vector(6)};
    for (int j = 0; j < 6; ++j) {
      m.centers.push_back(vec({u(rng), u(rng)}));
      m.coefficients[j] = u(rng);
    }
    auto p = to_primal(m);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      Vector x = vec({u(rng), u(rng)});
      worst = std::max(worst, std::abs(m.decision_value(x) - p.decision_value(x)));
    }
    EXPECT_LE(worst, 1e-9);
  }
}

TEST(TrainingLoss, Examples) {
  TeachingSet ts;
  ts.items = {{vec({1}), 1, Tag::anchor}, {vec({-1}), 1, Tag::anchor}};
  auto f = make_primal(KernelSpec::linear(), 1, vec({1}));
  EXPECT_DOUBLE_EQ(training_loss(f, ts), 1.0);
  const Vector z = vec({0.3, -0.2});
  TeachingSet pair;
  pair.items = {{z, 1, Tag::boundary_pos}, {z, -1, Tag::boundary_neg}};
  DualModel m{KernelSpec::gaussian(0.9), {vec({0, 0})}, vec({0.7})};
  EXPECT_DOUBLE_EQ(training_loss(m, pair), std::abs(m.decision_value(z)));
}

TEST(RkhsNorm, Examples) {
  DualModel m{KernelSpec::gaussian(0.9), {vec({0.1, 0.2})}, vec({1})};
  EXPECT_DOUBLE_EQ(rkhs_norm(m), 1.0);
  DualModel two{KernelSpec::gaussian(0.9), {vec({0.1, 0.2}), vec({-0.5, 0.3})}, vec({0.4, -1.3})};
  EXPECT_NEAR(rkhs_norm(two.scaled(-2.5)), 2.5 * rkhs_norm(two), 1e-12);
}

TEST(Fit, LinearRecoversTheta) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0, 1);
  for (int trial = 0; trial < 5; ++trial) {
    Vector t(3);
    for (int i = 0; i < 3; ++i) t[i] = g(rng);
    auto ts = linear_teaching_set(t);
    LearnerConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(trial);
    cfg.loss_tol = 1e-12;
    auto m = fit(ts, KernelSpec::linear(), cfg);
    auto theta = make_primal(KernelSpec::linear(), 3, t);
    EXPECT_GE(direction_similarity(m, theta), 1 - 1e-6);
    EXPECT_LE(training_loss(m, ts), 1e-9);
    EXPECT_NEAR(rkhs_norm(m), 1.0, 1e-9);
  }
}

TEST(Fit, LinearAgreesWithBruteForceInTwoDimensions) {
  const Vector t = vec({0.6, -1.3});
  auto ts = linear_teaching_set(t);
  LearnerConfig cfg;
  cfg.loss_tol = 1e-12;
  auto m = fit(ts, KernelSpec::linear(), cfg);
  auto bf = brute_force_fit_detailed(ts, KernelSpec::linear(), 720);
  const double pi = std::acos(-1.0);
  EXPECT_GE(direction_similarity(bf.model, make_primal(KernelSpec::linear(), 2, t)),
            std::cos(2 * pi / 720));
  EXPECT_LE(training_loss(m, ts), bf.loss + 1e-3);
}

TEST(Fit, PolynomialSetRecoversDirection) {
  const auto theta = make_primal(KernelSpec::polynomial(2), 2, vec({1, 4, 4}));
  auto pt = polynomial_teaching_set(theta, 2, 2, 5);
  LearnerConfig cfg;
  cfg.loss_tol = 1e-12;
  auto m = fit(pt.set, KernelSpec::polynomial(2), cfg);
  EXPECT_GE(direction_similarity(m, theta), 1 - 1e-4);
  auto bf = brute_force_fit_detailed(pt.set, KernelSpec::polynomial(2), 180);
  EXPECT_LE(training_loss(m, pt.set), bf.loss + 1e-3);
  const double pi = std::acos(-1.0);
  EXPECT_GE(direction_similarity(bf.model, theta), std::cos(2 * 2 * pi / 180));
}

TEST(Fit, BruteForceSeparablePair) {
  TeachingSet ts;
  ts.items = {{vec({1, 0}), 1, Tag::anchor}, {vec({-1, 0}), -1, Tag::anchor}};
  auto bf = brute_force_fit_detailed(ts, KernelSpec::linear(), 64);
  EXPECT_EQ(bf.loss, 0.0);
  EXPECT_GT(bf.model.theta[0], 0.0);
}

TEST(Fit, BruteForceRejectsLargeFeatureSpaces) {
  TeachingSet ts;
  ts.items = {{vec({1, 0, 0}), 1, Tag::anchor}};
  EXPECT_THROW(brute_force_fit(ts, KernelSpec::polynomial(2), 16), InvalidArgument);
}

TEST(Fit, GaussianSetConvergesAtLowOrder) {
  auto data = generate(DatasetKind::moons, 200, 0.1, 7);
  auto ref = train_reference(data, KernelSpec::gaussian(0.9), LearnerConfig{});
  GaussianTeachConfig tc;
  tc.s = 3;
  auto g = gaussian_teaching_set(ref.model, tc, 2);
  LearnerConfig cfg;
  cfg.seed = 1;
  auto m = fit(g.set, KernelSpec::gaussian(0.9), cfg);
  EXPECT_LE(training_loss(m, g.set), 1e-6);
  EXPECT_GT(m.decision_value(g.set.anchors()[0]), 0.0);
  EXPECT_NEAR(rkhs_norm(m), 1.0, 1e-9);
  EXPECT_LE(m.coefficient_l1(), 10.0 * m.centers.size());
}

TEST(Fit, ZeroLossIsFixedPointAndScaleInvariant) {
  const Vector t = vec({1, 2, -1});
  auto ts = linear_teaching_set(t);
  DualModel exact{KernelSpec::linear(), {Vector::Unit(3, 0), Vector::Unit(3, 1), Vector::Unit(3, 2)},
                  t.normalized()};
  EXPECT_LE(training_loss(exact, ts), 1e-15);
  EXPECT_LE(training_loss(exact.scaled(7.0), ts), 1e-14);
  LearnerConfig cfg;
  cfg.init_noise = 0.0;
  cfg.loss_tol = 1e-12;
  cfg.max_iters = 10;
  // the noiseless start sums the labelled items, which already satisfies every item
  auto res = fit_detailed(ts, KernelSpec::linear(), cfg);
  EXPECT_EQ(res.iterations, 0);
  EXPECT_LE(res.loss, 1e-12);
  EXPECT_GE(direction_similarity(res.model, exact), 1 - 1e-12);
}

TEST(Fit, BestCurveIsMonotoneAndDeterministic) {
  const auto theta = make_primal(KernelSpec::polynomial(2), 2, vec({1, 4, 4}));
  auto pt = polynomial_teaching_set(theta, 2, 2, 5);
  LearnerConfig cfg;
  cfg.seed = 42;
  cfg.loss_tol = 0.0;
  cfg.max_iters = 500;
  auto a = fit_detailed(pt.set, KernelSpec::polynomial(2), cfg);
  auto b = fit_detailed(pt.set, KernelSpec::polynomial(2), cfg);
  for (std::size_t i = 1; i < a.best_curve.size(); ++i)
    EXPECT_LE(a.best_curve[i], a.best_curve[i - 1]);
  EXPECT_EQ(a.model.coefficients, b.model.coefficients);
}

TEST(Fit, CoefficientBoundIsRespected) {
  auto data = generate(DatasetKind::moons, 200, 0.1, 7);
  auto ref = train_reference(data, KernelSpec::gaussian(0.9), LearnerConfig{});
  GaussianTeachConfig tc;
  tc.s = 4;
  auto g = gaussian_teaching_set(ref.model, tc, 2);
  LearnerConfig cfg;
  cfg.coeff_bound = 3.0;
  cfg.max_iters = 2000;
  auto res = fit_detailed(g.set, KernelSpec::gaussian(0.9), cfg);
  EXPECT_LE(res.model.coefficient_l1(), 3.0 * (1 + 1e-12));
  EXPECT_NEAR(rkhs_norm(res.model), 1.0, 1e-9);
}

TEST(Fit, NotConvergedCarriesBestModel) {
  TeachingSet ts;
  ts.items = {{vec({1}), 1, Tag::anchor}, {vec({1}), -1, Tag::anchor}};
  LearnerConfig cfg;
  cfg.max_iters = 50;
  try {
    fit(ts, KernelSpec::linear(), cfg);
    FAIL();
  } catch (const FitNotConverged& e) {
    EXPECT_NEAR(e.loss(), 1.0, 1e-12);
    EXPECT_EQ(e.model().coefficients.size(), 1);
  }
}

TEST(ProjectL1, Basics) {
  Vector v = vec({3, -1, 0.5});
  EXPECT_EQ(project_l1_ball(v, 10), v);
  Vector p = project_l1_ball(v, 2);
  EXPECT_NEAR(p.lpNorm<1>(), 2.0, 1e-12);
  EXPECT_NEAR(p[0], 2.0, 1e-12);
  EXPECT_NEAR(p[1], 0.0, 1e-12);
}
