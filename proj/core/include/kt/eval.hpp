#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <vector>

#include "kt/datasets.hpp"
#include "kt/error.hpp"
#include "kt/model.hpp"

namespace kt {

template <class M>
concept Hypothesis = requires(const M& m, const Vector& x) {
  { m.decision_value(x) } -> std::convertible_to<double>;
};

struct RiskReport {
  double err_star = 0.0;
  double err_hat = 0.0;
  double gap = 0.0;
  std::size_t n_samples = 0;
  double pointwise_sup = 0.0;
  double pointwise_mean = 0.0;  // mean |f* - f_hat| over the same inputs
  double sign_agreement = 1.0;
};

template <Hypothesis M>
double perceptron_risk(const M& model, const Dataset& data) {
  if (data.size() == 0) throw InvalidArgument("perceptron_risk: empty dataset");
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    acc += std::max(-data.y[i] * model.decision_value(data.x[i]), 0.0);
  return acc / static_cast<double>(data.size());
}

template <Hypothesis A, Hypothesis B>
double pointwise_gap(const A& f_star, const B& f_hat, const std::vector<Vector>& probes) {
  double sup = 0.0;
  for (const auto& x : probes)
    sup = std::max(sup, std::abs(f_star.decision_value(x) - f_hat.decision_value(x)));
  return sup;
}

// Fraction of probes outside the band around m1's zero set on which the two
// models agree in sign. A negative band selects 1e-6 * max |m1| on probes.
template <Hypothesis A, Hypothesis B>
double sign_agreement(const A& m1, const B& m2, const std::vector<Vector>& probes,
                      double exclusion_band = -1.0) {
  std::vector<double> v1(probes.size());
  double vmax = 0.0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    v1[i] = m1.decision_value(probes[i]);
    vmax = std::max(vmax, std::abs(v1[i]));
  }
  const double band = exclusion_band < 0.0 ? 1e-6 * vmax : exclusion_band;
  std::size_t counted = 0, agree = 0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    if (!(std::abs(v1[i]) > band)) continue;
    ++counted;
    const double v2 = m2.decision_value(probes[i]);
    if ((v1[i] > 0.0 && v2 > 0.0) || (v1[i] < 0.0 && v2 < 0.0)) ++agree;
  }
  if (counted == 0) throw InvalidArgument("sign_agreement: every probe was excluded");
  return static_cast<double>(agree) / static_cast<double>(counted);
}

template <Hypothesis A, Hypothesis B>
RiskReport risk_gap(const A& f_star, const B& f_hat, const Dataset& data) {
  if (data.size() == 0) throw InvalidArgument("risk_gap: empty dataset");
  RiskReport r;
  r.n_samples = data.size();
  double es = 0.0, eh = 0.0, mean = 0.0, vmax = 0.0;
  std::vector<double> fs(data.size()), fh(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    fs[i] = f_star.decision_value(data.x[i]);
    fh[i] = f_hat.decision_value(data.x[i]);
    es += std::max(-data.y[i] * fs[i], 0.0);
    eh += std::max(-data.y[i] * fh[i], 0.0);
    const double g = std::abs(fs[i] - fh[i]);
    mean += g;
    r.pointwise_sup = std::max(r.pointwise_sup, g);
    vmax = std::max(vmax, std::abs(fs[i]));
  }
  const double n = static_cast<double>(data.size());
  r.err_star = es / n;
  r.err_hat = eh / n;
  r.gap = std::abs(r.err_star - r.err_hat);
  r.pointwise_mean = mean / n;
  std::size_t counted = 0, agree = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!(std::abs(fs[i]) > 1e-6 * vmax)) continue;
    ++counted;
    if ((fs[i] > 0.0) == (fh[i] > 0.0) && fh[i] != 0.0) ++agree;
  }
  r.sign_agreement = counted ? static_cast<double>(agree) / counted : 1.0;
  return r;
}

double direction_similarity(const PrimalModel& a, const PrimalModel& b);
double direction_similarity(const DualModel& a, const DualModel& b);
double direction_similarity(const DualModel& a, const PrimalModel& b);
double direction_similarity(const PrimalModel& a, const DualModel& b);

// Uniform samples from the ball of the given radius around the origin.
std::vector<Vector> ball_probes(int d, double radius, std::size_t count,
                                std::uint64_t seed);
// count x count grid over [-half, half]^2.
std::vector<Vector> grid_probes(double half, int count);

std::string to_json(const RiskReport& r, int indent = 2);

}  // namespace kt
