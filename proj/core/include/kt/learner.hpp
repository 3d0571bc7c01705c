#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "kt/error.hpp"
#include "kt/model.hpp"
#include "kt/teacher.hpp"

namespace kt {

struct LearnerConfig {
  int max_iters = 20000;
  double step_c = 0.5;
  double loss_tol = 1e-6;
  std::pair<double, double> norm_band{0.5, 2.0};
  double coeff_bound = 0.0;  // 0 means 10 * number of centers
  std::uint64_t seed = 0;
  // Cap c/sqrt(t) by the Polyak length loss/||g||^2 (optimal value 0).
  bool polyak = true;
  double init_noise = 0.1;  // relative size of the seeded start perturbation

  void validate() const;
};

struct FitResult {
  DualModel model;
  double loss = 0.0;
  int iterations = 0;
  std::vector<double> best_curve;  // best loss so far, one entry per iteration
};

class FitNotConverged : public Error {
 public:
  FitNotConverged(const std::string& what, FitResult best)
      : Error(what), best_(std::move(best)) {}
  const FitResult& best() const noexcept { return best_; }
  const DualModel& model() const noexcept { return best_.model; }
  double loss() const noexcept { return best_.loss; }

 private:
  FitResult best_;
};

template <class Model>
double training_loss(const Model& m, const TeachingSet& ts) {
  double acc = 0.0;
  for (const auto& it : ts.items) acc += std::max(-it.y * m.decision_value(it.x), 0.0);
  return acc;
}

// Projected subgradient descent on the perceptron loss. Linear specs run in
// primal coordinates (returned as a dual model over the standard basis);
// other specs run over the distinct teaching inputs as centers.
FitResult fit_detailed(const TeachingSet& ts, const KernelSpec& spec,
                       const LearnerConfig& config);
FitResult fit_detailed(const std::vector<Vector>& xs, const std::vector<int>& ys,
                       const KernelSpec& spec, const LearnerConfig& config);
DualModel fit(const TeachingSet& ts, const KernelSpec& spec, const LearnerConfig& config);

struct BruteForceResult {
  PrimalModel model;
  double loss = 0.0;
};

BruteForceResult brute_force_fit_detailed(const TeachingSet& ts, const KernelSpec& spec,
                                          int resolution);
PrimalModel brute_force_fit(const TeachingSet& ts, const KernelSpec& spec, int resolution);

// Euclidean projection onto the l1 ball of the given radius.
Vector project_l1_ball(const Vector& v, double radius);

}  // namespace kt
