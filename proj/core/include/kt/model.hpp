#pragma once

#include <string>
#include <vector>

#include "kt/kernel.hpp"

namespace kt {

struct DualModel {
  KernelSpec spec;
  std::vector<Vector> centers;
  Vector coefficients;

  int input_dim() const;
  double coefficient_l1() const { return coefficients.lpNorm<1>(); }
  double decision_value(const Vector& x) const;
  Vector decision_values(const std::vector<Vector>& xs) const;
  DualModel scaled(double t) const;
};

struct PrimalModel {
  KernelSpec spec;
  int d = 0;  // input dimension
  FeatureVector theta;
  std::shared_ptr<const FeatureMap> features;  // set by make_primal

  double decision_value(const Vector& x) const;
  Vector decision_values(const std::vector<Vector>& xs) const;
  PrimalModel scaled(double t) const;
};

PrimalModel make_primal(const KernelSpec& spec, int d, const Vector& theta);

inline double decision_value(const DualModel& m, const Vector& x) {
  return m.decision_value(x);
}
inline double decision_value(const PrimalModel& m, const Vector& x) {
  return m.decision_value(x);
}

// sqrt(eta' Lambda eta) over the model's own centers.
double rkhs_norm(const DualModel& m);
double rkhs_norm(const PrimalModel& m);

// Expands a finite-dimensional dual model into feature coordinates.
PrimalModel to_primal(const DualModel& m);

// Truncates every center's Gaussian feature map at order s; the result
// lives in the truncated feature space.
PrimalModel project_truncated(const DualModel& m, int s);

std::string to_json(const DualModel& m, int indent = 2);
DualModel dual_model_from_json(const std::string& text);

}  // namespace kt
