#include "kt/model.hpp"

#include <cmath>

#include "kt/error.hpp"
#include "kt/linalg.hpp"

namespace kt {

int DualModel::input_dim() const {
  return centers.empty() ? 0 : static_cast<int>(centers.front().size());
}

double DualModel::decision_value(const Vector& x) const {
  if (!centers.empty() && x.size() != centers.front().size())
    throw InvalidArgument("decision value: dimension mismatch");
  double f = 0.0;
  for (std::size_t j = 0; j < centers.size(); ++j)
    f += coefficients[static_cast<Eigen::Index>(j)] * eval_kernel(spec, centers[j], x);
  return f;
}

Vector DualModel::decision_values(const std::vector<Vector>& xs) const {
  Vector out(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = decision_value(xs[i]);
  return out;
}

DualModel DualModel::scaled(double t) const {
  DualModel m = *this;
  m.coefficients *= t;
  return m;
}

PrimalModel make_primal(const KernelSpec& spec, int d, const Vector& theta) {
  auto fm = std::make_shared<const FeatureMap>(spec, d);
  if (theta.size() != fm->dim())
    throw InvalidArgument("primal parameter has length " +
                          std::to_string(theta.size()) + ", feature space has " +
                          std::to_string(fm->dim()));
  return PrimalModel{spec, d, FeatureVector{theta, fm->layout()}, fm};
}

double PrimalModel::decision_value(const Vector& x) const {
  if (x.size() != d) throw InvalidArgument("decision value: dimension mismatch");
  if (spec.family == KernelFamily::Linear) return theta.coords.dot(x);
  if (features) return theta.coords.dot((*features)(x));
  return theta.coords.dot(FeatureMap(spec, d)(x));
}

Vector PrimalModel::decision_values(const std::vector<Vector>& xs) const {
  Vector out(static_cast<Eigen::Index>(xs.size()));
  if (xs.empty()) return out;
  auto fm = features ? features : std::make_shared<const FeatureMap>(spec, d);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].size() != d) throw InvalidArgument("decision value: dimension mismatch");
    out[static_cast<Eigen::Index>(i)] = theta.coords.dot((*fm)(xs[i]));
  }
  return out;
}

PrimalModel PrimalModel::scaled(double t) const {
  PrimalModel m = *this;
  m.theta.coords *= t;
  return m;
}

double rkhs_norm(const DualModel& m) {
  if (m.centers.empty()) return 0.0;
  const Matrix g = gram_matrix(m.spec, m.centers).entries;
  const double q = m.coefficients.dot(g * m.coefficients);
  if (q < -1e-12) throw Error("negative quadratic form in rkhs_norm");
  return std::sqrt(std::max(q, 0.0));
}

double rkhs_norm(const PrimalModel& m) { return m.theta.coords.norm(); }

PrimalModel to_primal(const DualModel& m) {
  if (!m.spec.finite_dimensional())
    throw InvalidArgument("to_primal: gaussian models have no finite feature space");
  const int d = m.input_dim();
  if (d == 0) throw InvalidArgument("to_primal: model has no centers");
  FeatureMap fm(m.spec, d);
  Vector theta = Vector::Zero(fm.dim());
  for (std::size_t j = 0; j < m.centers.size(); ++j)
    theta += m.coefficients[static_cast<Eigen::Index>(j)] * fm(m.centers[j]);
  return make_primal(m.spec, d, theta);
}

PrimalModel project_truncated(const DualModel& m, int s) {
  if (m.spec.family != KernelFamily::Gaussian &&
      m.spec.family != KernelFamily::TruncatedGaussian)
    throw InvalidArgument("project_truncated needs a gaussian model");
  DualModel t = m;
  t.spec = KernelSpec::truncated_gaussian(m.spec.sigma, s);
  return to_primal(t);
}

}  // namespace kt
