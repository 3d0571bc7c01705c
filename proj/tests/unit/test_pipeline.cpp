#include <cmath>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "kt/io.hpp"
#include "kt/pipeline.hpp"

using namespace kt;

namespace {

const Dataset& circles() {
  static const Dataset ds = generate(DatasetKind::circles, 200, 0.05, 7);
  return ds;
}

const ReferenceModel& circles_ref() {
  static const ReferenceModel ref =
      train_reference(circles(), KernelSpec::gaussian(0.9), LearnerConfig{});
  return ref;
}

SweepConfig small_sweep(unsigned threads) {
  SweepConfig cfg;
  cfg.s_min = 2;
  cfg.s_max = 4;
  cfg.rebuilds = 2;
  cfg.restarts = 2;
  cfg.seed = 11;
  cfg.threads = threads;
  cfg.learner.max_iters = 3000;
  return cfg;
}

}  // namespace

TEST(DeriveSeed, DistinctAndStable) {
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
  EXPECT_NE(derive_seed(1, {2}), derive_seed(2, {2}));
}

TEST(FitSlope, Line) {
  EXPECT_NEAR(fit_slope({1, 2, 3, 4}, {3, 1, -1, -3}), -2.0, 1e-15);
  EXPECT_THROW(fit_slope({1, 1}, {2, 3}), InvalidArgument);
  EXPECT_THROW(fit_slope({1}, {2}), InvalidArgument);
}

TEST(Pipeline, CirclesLowOrder) {
  PipelineConfig cfg;
  cfg.teach.s = 3;
  cfg.probes = 2000;
  auto res = run_gaussian_pipeline(circles(), circles_ref(), cfg, 5);
  EXPECT_EQ(res.teaching.set.size(), 2u * 9 + 1);
  EXPECT_TRUE(res.certificate.has_value()) << res.certificate_error;
  EXPECT_LE(res.risk.gap, 0.01);
  EXPECT_NEAR(res.probe_radius, res.teaching.config.input_radius(0.9), 0.0);
  EXPECT_GE(res.probe_sup, res.risk.pointwise_sup * 0.0);
}

TEST(Pipeline, StageErrorsNameTheStage) {
  PipelineConfig cfg;
  cfg.teach.epsilon = 2.0;
  try {
    run_gaussian_pipeline(circles(), circles_ref(), cfg, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(std::string(e.what()).rfind("teacher: ", 0), 0u) << e.what();
  }
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  auto a = run_sweep(circles(), circles_ref(), small_sweep(1));
  auto b = run_sweep(circles(), circles_ref(), small_sweep(3));
  ASSERT_EQ(a.rows.size(), 3u);
  EXPECT_TRUE(a.failures.empty());
  EXPECT_EQ(sweep_csv(a), sweep_csv(b));
  EXPECT_EQ(to_json(a), to_json(b));
  for (const auto& row : a.rows) {
    EXPECT_EQ(row.trials, 4);
    EXPECT_EQ(row.ts_size, static_cast<std::size_t>(2 * (row.requested_rank) + 1));
  }
}

TEST(Sweep, CsvLayout) {
  auto a = run_sweep(circles(), circles_ref(), small_sweep(1));
  const auto csv = sweep_csv(a);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "s,ts_size,err_star,err_hat_mean,err_hat_std,gap_mean");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  auto j = nlohmann::json::parse(to_json(a));
  EXPECT_EQ(j["rows"].size(), 3u);
  EXPECT_EQ(j["dataset"], "circles");
}

TEST(Sweep, RejectsBadRanges) {
  SweepConfig cfg = small_sweep(1);
  cfg.s_min = 5;
  cfg.s_max = 4;
  EXPECT_THROW(run_sweep(circles(), circles_ref(), cfg), InvalidArgument);
  cfg = small_sweep(1);
  cfg.rebuilds = 0;
  EXPECT_THROW(run_sweep(circles(), circles_ref(), cfg), InvalidArgument);
}

TEST(Serialize, ModelRoundTrip) {
  const auto& m = circles_ref().model;
  auto back = dual_model_from_json(to_json(m));
  EXPECT_EQ(back.spec, m.spec);
  ASSERT_EQ(back.centers.size(), m.centers.size());
  for (std::size_t i = 0; i < m.centers.size(); ++i) EXPECT_EQ(back.centers[i], m.centers[i]);
  EXPECT_EQ(back.coefficients, m.coefficients);
  EXPECT_THROW(dual_model_from_json("{"), InvalidArgument);
  EXPECT_THROW(dual_model_from_json(R"({"version":2})"), InvalidArgument);
}

TEST(Serialize, TeachingCsvRoundTrip) {
  GaussianTeachConfig tc;
  tc.s = 3;
  auto g = gaussian_teaching_set(circles_ref().model, tc, 4);
  auto back = parse_teaching_csv(format_teaching_csv(g.set));
  ASSERT_EQ(back.size(), g.set.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back.items[i].x, g.set.items[i].x);
    EXPECT_EQ(back.items[i].y, g.set.items[i].y);
    EXPECT_EQ(back.items[i].tag, g.set.items[i].tag);
  }
  EXPECT_THROW(parse_teaching_csv("x1,x2,y,tag\n1,2,1\n"), ParseError);
}

TEST(Serialize, ConfigJson) {
  auto c = choose_truncation(0.1, 2);
  auto j = nlohmann::json::parse(to_json(c));
  EXPECT_EQ(j["s"], c.s);
  EXPECT_EQ(j["truncated_dim"], c.truncated_dim());
}
