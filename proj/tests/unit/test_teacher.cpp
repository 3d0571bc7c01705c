#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kt/datasets.hpp"
#include "kt/error.hpp"
#include "kt/learner.hpp"
#include "kt/linalg.hpp"
#include "kt/teacher.hpp"

using namespace kt;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

PrimalModel poly144() { return make_primal(KernelSpec::polynomial(2), 2, vec({1, 4, 4})); }

const ReferenceModel& moons_reference() {
  static const ReferenceModel ref = [] {
    auto data = generate(DatasetKind::moons, 200, 0.1, 7);
    return train_reference(data, KernelSpec::gaussian(0.9), LearnerConfig{});
  }();
  return ref;
}

}  // namespace

TEST(LinearTeaching, PaperInstance) {
  const Vector theta = vec({-3, 3, 5});
  TeachingSet paper;
  paper.items = {{vec({0.46, 0.86, -0.24}), 1, Tag::basis},
                 {vec({0.76, -0.24, 0.6}), 1, Tag::basis},
                 {vec({-1.22, -0.62, -0.36}), 1, Tag::opposite_sum},
                 {vec({-0.46, 0.46, 0.76}), 1, Tag::anchor}};
  for (int i = 0; i < 3; ++i)
    EXPECT_LT(std::abs(paper.items[i].x.dot(theta)) / theta.norm(), 0.01);
  EXPECT_NEAR(paper.items[3].x.dot(theta), 6.56, 1e-12);
  EXPECT_TRUE((paper.items[0].x + paper.items[1].x + paper.items[2].x).isZero(1e-12));

  auto ts = linear_teaching_set(theta);
  ASSERT_EQ(ts.size(), 4u);
  Vector sum = Vector::Zero(3);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(ts.items[i].y, 1);
    EXPECT_LE(std::abs(ts.items[i].x.dot(theta)), 1e-10);
    sum += ts.items[i].x;
  }
  EXPECT_LE(sum.norm(), 1e-12);
  EXPECT_EQ(ts.items[3].tag, Tag::anchor);
  EXPECT_DOUBLE_EQ(ts.items[3].x.dot(theta), theta.squaredNorm());
}

TEST(LinearTeaching, EdgeCases) {
  auto one = linear_teaching_set(vec({2}));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.items[0].x, vec({2}));
  EXPECT_EQ(one.items[0].y, 1);
  EXPECT_THROW(linear_teaching_set(vec({0, 0, 0})), InvalidArgument);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0, 1);
  Vector t(5);
  for (int i = 0; i < 5; ++i) t[i] = g(rng);
  auto ts = linear_teaching_set(t);
  ASSERT_EQ(ts.size(), 6u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_LE(std::abs(ts.items[i].x.dot(t)), 1e-10);
}

TEST(LinearTeaching, AssumptionReport) {
  const Vector theta = vec({-3, 3, 5});
  auto rep = check_assumptions(linear_teaching_set(theta), make_primal(KernelSpec::linear(), 3, theta));
  EXPECT_EQ(rep.requested_rank, 2);
  EXPECT_EQ(rep.achieved_rank, 2);
  EXPECT_LE(rep.max_coherence, 1e-12);
  EXPECT_TRUE(rep.assumption1_ok);
  EXPECT_TRUE(rep.smoothness_ok);
  EXPECT_TRUE(rep.anchor_ok);
}

TEST(PolynomialTeaching, KnownRootIsOnBoundary) {
  // x1 = (-2 sqrt2 + 2) x2 solves x1^2 + 4 sqrt2 x1 x2 + 4 x2^2 = 0
  const Vector z = vec({2 - 2 * std::sqrt(2.0), 1});
  EXPECT_NEAR(poly144().decision_value(z), 0.0, 1e-12);
}

TEST(PolynomialTeaching, SizeRootsAndRank) {
  auto pt = polynomial_teaching_set(poly144(), 2, 2, 5);
  ASSERT_EQ(pt.set.size(), 5u);
  pt.set.validate();
  EXPECT_EQ(pt.report.achieved_rank, 2);
  EXPECT_TRUE(pt.report.assumption1_ok);
  const auto zs = pt.set.boundary_points();
  ASSERT_EQ(zs.size(), 2u);
  FeatureMap fm(KernelSpec::polynomial(2), 2);
  for (const auto& z : zs) EXPECT_LE(std::abs(poly144().decision_value(z)), 1e-9);
  Matrix f(3, 2);
  f.col(0) = fm(zs[0]);
  f.col(1) = fm(zs[1]);
  EXPECT_EQ(numerical_rank(f), 2);
  const auto anchors = pt.set.anchors();
  ASSERT_EQ(anchors.size(), 1u);
  EXPECT_GT(poly144().decision_value(anchors[0]), 0.0);
  int twins = 0;
  for (const auto& it : pt.set.items) twins += it.x == zs[0];
  EXPECT_EQ(twins, 2);
}

TEST(PolynomialTeaching, Deterministic) {
  auto a = polynomial_teaching_set(poly144(), 2, 2, 9);
  auto b = polynomial_teaching_set(poly144(), 2, 2, 9);
  ASSERT_EQ(a.set.size(), b.set.size());
  for (std::size_t i = 0; i < a.set.size(); ++i) EXPECT_EQ(a.set.items[i].x, b.set.items[i].x);
}

TEST(PolynomialTeaching, BoundaryPointsCountZero) {
  EXPECT_TRUE(polynomial_boundary_points(poly144(), 2, 2, 0, 1).empty());
}

TEST(PolynomialTeaching, CounterexampleHasNoRoots) {
  for (int d : {2, 3}) {
    for (int k : {2, 4}) {
      const auto theta = counterexample_theta(d, k);
      EXPECT_NEAR(theta.theta.coords.norm(), 1.0, 1e-12);
      EXPECT_THROW(polynomial_teaching_set(theta, d, k, 3), SamplerExhausted);
      const auto count = static_cast<std::size_t>(theta.theta.size() - 1);
      try {
        polynomial_boundary_points(theta, d, k, count, 3);
        FAIL();
      } catch (const SamplerExhausted& e) {
        EXPECT_EQ(e.achieved(), 0u);
        EXPECT_EQ(e.requested(), count);
      }
    }
  }
}

TEST(PolynomialTeaching, CounterexampleFailsAssumptionOne) {
  const auto theta = counterexample_theta(2, 2);
  TeachingSet partial;
  partial.items.push_back({vec({1, 0}), 1, Tag::anchor});
  auto rep = check_assumptions(partial, theta);
  EXPECT_EQ(rep.requested_rank, 2);
  EXPECT_EQ(rep.achieved_rank, 0);
  EXPECT_FALSE(rep.assumption1_ok);
  EXPECT_GT(rep.anchor_margin, 0.0);
}

TEST(ClosedForm, TwoPointCase) {
  const double sigma = 0.9;
  const Vector z = vec({0.3, 0.1}), a = vec({-0.4, 0.5});
  TeachingSet ts;
  ts.items = {{z, 1, Tag::boundary_pos}, {z, -1, Tag::boundary_neg}, {a, 1, Tag::anchor}};
  const double c = eval_kernel(KernelSpec::gaussian(sigma), z, a);
  auto cf = closed_form_certificate(ts, sigma);
  EXPECT_NEAR(cf.eta[0], -c / (1 - c * c), 1e-12);
  EXPECT_NEAR(cf.eta[1], 1 / (1 - c * c), 1e-12);
  // f(a) = 1 before normalization, and beta0 = eta . nu = eta_a
  EXPECT_NEAR(cf.beta0, 1 / (1 - c * c), 1e-12);
  EXPECT_NEAR(cf.model.decision_value(z), 0.0, 1e-12);
  EXPECT_NEAR(cf.model.decision_value(a), 1 / std::sqrt(cf.beta0), 1e-12);
  // before normalization, scaling eta by (1 - c^2) gives (-c, 1) with f(a) = 1 - c^2
  DualModel raw{KernelSpec::gaussian(sigma), {z, a}, cf.eta * (1 - c * c)};
  EXPECT_NEAR(raw.decision_value(a), 1 - c * c, 1e-12);
  EXPECT_NEAR(rkhs_norm(DualModel{KernelSpec::gaussian(sigma), {z, a}, cf.eta}),
              std::sqrt(cf.beta0), 1e-12);
}

TEST(ClosedForm, AnchorOnly) {
  TeachingSet ts;
  ts.items = {{vec({0.2, 0.2}), 1, Tag::anchor}};
  auto m = closed_form_dual(ts, 0.9);
  ASSERT_EQ(m.coefficients.size(), 1);
  EXPECT_DOUBLE_EQ(m.coefficients[0], 1.0);
}

TEST(ClosedForm, DuplicatePointsAreSingular) {
  TeachingSet ts;
  const Vector z = vec({0.3, 0.1});
  ts.items = {{z, 1, Tag::boundary_pos}, {z, -1, Tag::boundary_neg},
              {z, 1, Tag::anchor}};
  EXPECT_THROW(closed_form_dual(ts, 0.9), SingularMatrix);
}

TEST(GaussianTeaching, MoonsOrderFive) {
  GaussianTeachConfig cfg;
  cfg.s = 5;
  auto g = gaussian_teaching_set(moons_reference().model, cfg, 17);
  EXPECT_EQ(g.config.s, 5);
  EXPECT_EQ(g.config.truncated_dim(), 21);
  ASSERT_EQ(g.set.size(), 2u * 20u + 1u);
  g.set.validate();
  EXPECT_EQ(g.report.requested_rank, 20);
  EXPECT_EQ(g.report.achieved_rank, 20);
  EXPECT_TRUE(g.report.assumption1_ok);
  EXPECT_EQ(check_assumptions(g.set, g.theta_tilde, g.config).achieved_rank, 20);
  EXPECT_NEAR(g.theta_tilde.theta.coords.norm(), 1.0, 1e-12);
  const double radius = g.config.teaching_radius(0.9);
  for (const auto& it : g.set.items) EXPECT_LE(it.x.norm(), radius);
  for (const auto& z : g.set.boundary_points())
    EXPECT_LE(std::abs(g.theta_tilde.decision_value(z)), 1e-9);
  EXPECT_GT(g.report.anchor_margin, 0.0);

  auto cf = closed_form_certificate(g.set, 0.9);
  EXPECT_LE(cf.residual_inf, 1e-8);
  EXPECT_LE(training_loss(cf.model, g.set), 1e-10);
  EXPECT_GT(cf.model.decision_value(g.set.anchors()[0]), 0.0);
  EXPECT_NEAR(rkhs_norm(cf.model), 1.0, 1e-9);
}

TEST(GaussianTeaching, DeterministicGivenSeed) {
  GaussianTeachConfig cfg;
  cfg.s = 3;
  auto a = gaussian_teaching_set(moons_reference().model, cfg, 4);
  auto b = gaussian_teaching_set(moons_reference().model, cfg, 4);
  ASSERT_EQ(a.set.size(), b.set.size());
  for (std::size_t i = 0; i < a.set.size(); ++i) EXPECT_EQ(a.set.items[i].x, b.set.items[i].x);
}

TEST(GaussianTeaching, AppendixConvention) {
  GaussianTeachConfig cfg;
  cfg.s = 3;
  cfg.convention = RConvention::appendix;
  auto g = gaussian_teaching_set(moons_reference().model, cfg, 4);
  // C(5,3) - 1 = 9 boundary points, duplicated, plus one anchor per side
  ASSERT_EQ(g.set.size(), 20u);
  const auto anchors = g.set.anchors();
  ASSERT_EQ(anchors.size(), 2u);
  EXPECT_GT(g.theta_tilde.decision_value(anchors[0]), 0.0);
  EXPECT_LT(g.theta_tilde.decision_value(anchors[1]), 0.0);
  auto cf = closed_form_certificate(g.set, 0.9);
  EXPECT_LE(training_loss(cf.model, g.set), 1e-10);
}

TEST(GaussianTeaching, StrictModesReportShortfall) {
  GaussianTeachConfig cfg;
  cfg.s = 12;
  cfg.search.require_full_rank = true;
  EXPECT_THROW(gaussian_teaching_set(moons_reference().model, cfg, 4), SamplerExhausted);
  GaussianTeachConfig anchor_cfg;
  anchor_cfg.s = 3;
  anchor_cfg.strict_anchor = true;
  anchor_cfg.anchor_Q = 1e-6;
  EXPECT_THROW(gaussian_teaching_set(moons_reference().model, anchor_cfg, 4), SamplerExhausted);
}

TEST(GaussianTeaching, RejectsNonGaussianModel) {
  DualModel m{KernelSpec::polynomial(2), {vec({1, 0})}, vec({1})};
  EXPECT_THROW(gaussian_teaching_set(m, 0.1, 1), InvalidArgument);
}
