#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kt/datasets.hpp"
#include "kt/eval.hpp"
#include "kt/learner.hpp"
#include "kt/teacher.hpp"

namespace kt {

// splitmix64 over the root seed and a list of indices.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path);

struct PipelineConfig {
  double sigma = 0.9;
  GaussianTeachConfig teach;
  LearnerConfig reference;  // learner settings for the dataset-wide model
  LearnerConfig learner;    // learner settings on the teaching set
  std::size_t probes = 10000;
};

struct PipelineResult {
  ReferenceModel reference;
  GaussianTeaching teaching;
  FitResult fit;
  bool fit_converged = false;
  std::optional<ClosedForm> certificate;
  std::string certificate_error;
  double certificate_loss = 0.0;
  RiskReport risk;
  double probe_sup = 0.0;  // pointwise gap over ball probes
  double probe_radius = 0.0;
};

// Fits the dataset-wide reference model, builds the teaching set from it,
// refits on the set alone and evaluates. Stage failures propagate as
// exceptions whose message starts with the stage name.
PipelineResult run_gaussian_pipeline(const Dataset& data, const PipelineConfig& cfg,
                                     std::uint64_t seed);
// Same, reusing an existing reference model.
PipelineResult run_gaussian_pipeline(const Dataset& data, const ReferenceModel& ref,
                                     const PipelineConfig& cfg, std::uint64_t seed);

struct SweepConfig {
  double sigma = 0.9;
  int s_min = 2;
  int s_max = 12;
  int rebuilds = 5;  // teaching sets per s
  int restarts = 5;  // learner restarts per teaching set
  std::uint64_t seed = 0;
  RConvention convention = RConvention::main;
  double ball_factor = 4.0;
  double anchor_Q = 1.0;
  LearnerConfig learner;
  unsigned threads = 0;  // 0 picks the hardware concurrency
};

struct SweepRow {
  int s = 0;
  std::size_t ts_size = 0;
  double err_star = 0.0;
  double err_hat_mean = 0.0;
  double err_hat_std = 0.0;
  double gap_mean = 0.0;
  int trials = 0;
  double sup_mean = 0.0;        // mean pointwise gap over the dataset
  double fit_loss_mean = 0.0;   // mean final training loss of the learner
  double rank_mean = 0.0;       // mean achieved rank of the boundary images
  int requested_rank = 0;
};

struct SweepFailure {
  int s = 0;
  std::string reason;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepFailure> failures;
  std::string dataset_name;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::string convention;
};

using SweepProgress = std::function<void(int s, const std::string& status)>;

SweepResult run_sweep(const Dataset& data, const ReferenceModel& ref,
                      const SweepConfig& cfg, const SweepProgress& progress = {});

std::string sweep_csv(const SweepResult& r);
std::string to_json(const SweepResult& r, int indent = 2);

// Least-squares slope of ys against xs.
double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace kt
