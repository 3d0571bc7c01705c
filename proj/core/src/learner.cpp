#include "kt/learner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "kt/linalg.hpp"

namespace kt {

void LearnerConfig::validate() const {
  if (max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
  if (!(step_c > 0.0)) throw InvalidArgument("step_c must be positive");
  if (!(loss_tol >= 0.0)) throw InvalidArgument("loss_tol must be >= 0");
  if (!(norm_band.first > 0.0 && norm_band.first <= 1.0 && 1.0 <= norm_band.second))
    throw InvalidArgument("norm band must satisfy 0 < lo <= 1 <= hi");
  if (coeff_bound < 0.0) throw InvalidArgument("coeff_bound must be >= 0");
}

Vector project_l1_ball(const Vector& v, double radius) {
  if (v.lpNorm<1>() <= radius) return v;
  // sort-based projection onto the simplex of the magnitudes
  std::vector<double> u(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) u[i] = std::abs(v[i]);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double t = (cum - radius) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) tau = t;
  }
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out[i] = std::copysign(std::max(std::abs(v[i]) - tau, 0.0), v[i]);
  return out;
}

namespace {

// Problem in coefficient space: f(items) = F w, step direction c = U' s with
// norm^2 = c' G c.
struct Problem {
  Matrix F;
  Matrix U;
  Matrix G;
  Vector y;
};

double loss_of(const Problem& p, const Vector& w, Vector& f) {
  f.noalias() = p.F * w;
  double l = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) l += std::max(-p.y[i] * f[i], 0.0);
  return l;
}

double norm_of(const Problem& p, const Vector& w) {
  return std::sqrt(std::max(w.dot(p.G * w), 0.0));
}

// Brings the unit-norm iterate inside the l1 cone; returns false if it could
// not.
bool enforce_cone(const Problem& p, Vector& w, double bound) {
  for (int round = 0; round < 50; ++round) {
    const double n = norm_of(p, w);
    if (n == 0.0) return false;
    w /= n;
    if (w.lpNorm<1>() <= bound * (1.0 + 1e-12)) return true;
    w = project_l1_ball(w, bound);
  }
  const double n = norm_of(p, w);
  if (n == 0.0) return false;
  w /= n;
  return w.lpNorm<1>() <= bound * (1.0 + 1e-12);
}

FitResult run(const Problem& p, const LearnerConfig& cfg, const KernelSpec& spec,
              std::vector<Vector> centers) {
  cfg.validate();
  const Eigen::Index m = p.G.rows();
  const double bound = cfg.coeff_bound > 0.0 ? cfg.coeff_bound : 10.0 * m;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector w = p.U.transpose() * p.y;
  double wn = norm_of(p, w);
  Vector noise(m);
  for (Eigen::Index i = 0; i < m; ++i) noise[i] = gauss(rng);
  const double nn = norm_of(p, noise);
  if (wn == 0.0) {
    w = noise;
    wn = nn;
  } else if (nn > 0.0 && cfg.init_noise > 0.0) {
    w = w / wn + noise * (cfg.init_noise / nn);
  }
  if (!enforce_cone(p, w, bound)) {
    w = Vector::Unit(m, 0);
    if (!enforce_cone(p, w, bound)) throw Error("fit: no feasible starting point");
  }

  Vector f(p.F.rows());
  Vector best = w;
  double best_loss = loss_of(p, w, f);
  FitResult res;
  res.best_curve.reserve(static_cast<std::size_t>(cfg.max_iters));
  Vector s(p.F.rows());
  int t = 0;
  for (t = 1; t <= cfg.max_iters && best_loss > cfg.loss_tol; ++t) {
    const double l = loss_of(p, w, f);
    for (Eigen::Index i = 0; i < f.size(); ++i)
      s[i] = (-p.y[i] * f[i] > 0.0) ? -p.y[i] : 0.0;
    const Vector c = p.U.transpose() * s;
    const double g2 = c.dot(p.G * c);
    if (!(g2 > 0.0)) break;  // zero subgradient: nothing more to do
    double step = cfg.step_c / (std::sqrt(static_cast<double>(t)) * std::sqrt(g2));
    if (cfg.polyak) step = std::min(step, l / g2);
    w -= step * c;

    const double n = norm_of(p, w);
    if (n == 0.0) break;
    if (n < cfg.norm_band.first) w *= cfg.norm_band.first / n;
    if (n > cfg.norm_band.second) w *= cfg.norm_band.second / n;

    const double n2 = norm_of(p, w);
    Vector unit = w / n2;
    if (unit.lpNorm<1>() > bound * (1.0 + 1e-12)) {
      if (!enforce_cone(p, unit, bound)) break;
      w = unit * n2;
    }
    const double lu = loss_of(p, unit, f);
    if (lu < best_loss) {
      best_loss = lu;
      best = unit;
    }
    res.best_curve.push_back(best_loss);
  }
  res.iterations = t - 1;
  res.loss = best_loss;
  res.model = DualModel{spec, std::move(centers), best};
  return res;
}

Problem linear_problem(const std::vector<Vector>& xs, const std::vector<int>& ys) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  const auto d = xs.front().size();
  Problem p;
  p.F.resize(n, d);
  p.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    p.F.row(i) = xs[static_cast<std::size_t>(i)].transpose();
    p.y[i] = ys[static_cast<std::size_t>(i)];
  }
  p.U = p.F;
  p.G = Matrix::Identity(d, d);
  return p;
}

}  // namespace

FitResult fit_detailed(const std::vector<Vector>& xs, const std::vector<int>& ys,
                       const KernelSpec& spec, const LearnerConfig& config) {
  if (xs.empty()) throw InvalidArgument("fit: no training items");
  if (xs.size() != ys.size()) throw InvalidArgument("fit: label count mismatch");
  spec.validate();
  const auto d = xs.front().size();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].size() != d) throw InvalidArgument("fit: items differ in dimension");
    if (ys[i] != 1 && ys[i] != -1) throw InvalidArgument("fit: label not in {-1,+1}");
  }

  if (spec.family == KernelFamily::Linear) {
    std::vector<Vector> basis;
    for (Eigen::Index i = 0; i < d; ++i) basis.push_back(Vector::Unit(d, i));
    return run(linear_problem(xs, ys), config, spec, std::move(basis));
  }

  // distinct inputs become the centers
  std::vector<Vector> centers;
  std::vector<Eigen::Index> where(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto it = std::find(centers.begin(), centers.end(), xs[i]);
    if (it == centers.end()) {
      where[i] = static_cast<Eigen::Index>(centers.size());
      centers.push_back(xs[i]);
    } else {
      where[i] = std::distance(centers.begin(), it);
    }
  }
  const auto n = static_cast<Eigen::Index>(xs.size());
  const auto m = static_cast<Eigen::Index>(centers.size());
  Problem p;
  p.G = gram_matrix(spec, centers).entries;
  p.F.resize(n, m);
  p.U = Matrix::Zero(n, m);
  p.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    p.F.row(i) = p.G.row(where[static_cast<std::size_t>(i)]);
    p.U(i, where[static_cast<std::size_t>(i)]) = 1.0;
    p.y[i] = ys[static_cast<std::size_t>(i)];
  }
  return run(p, config, spec, std::move(centers));
}

FitResult fit_detailed(const TeachingSet& ts, const KernelSpec& spec,
                       const LearnerConfig& config) {
  std::vector<Vector> xs;
  std::vector<int> ys;
  for (const auto& it : ts.items) {
    xs.push_back(it.x);
    ys.push_back(it.y);
  }
  return fit_detailed(xs, ys, spec, config);
}

DualModel fit(const TeachingSet& ts, const KernelSpec& spec, const LearnerConfig& config) {
  auto res = fit_detailed(ts, spec, config);
  if (res.loss > config.loss_tol)
    throw FitNotConverged("fit: loss " + std::to_string(res.loss) + " above tolerance after " +
                              std::to_string(res.iterations) + " iterations",
                          std::move(res));
  return res.model;
}

BruteForceResult brute_force_fit_detailed(const TeachingSet& ts, const KernelSpec& spec,
                                          int resolution) {
  if (ts.items.empty()) throw InvalidArgument("brute force: empty teaching set");
  if (resolution < 4) throw InvalidArgument("brute force: resolution must be >= 4");
  const int d = ts.dim();
  FeatureMap fm(spec, d);
  const auto D = fm.dim();
  if (D > 4) throw InvalidArgument("brute force: feature dimension above 4");
  const auto n = static_cast<Eigen::Index>(ts.items.size());
  Matrix F(n, D);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    F.row(i) = fm(ts.items[static_cast<std::size_t>(i)].x).transpose();
    y[i] = ts.items[static_cast<std::size_t>(i)].y;
  }

  const double pi = std::acos(-1.0);
  Vector u(D), best(D);
  double best_loss = std::numeric_limits<double>::infinity();
  auto consider = [&]() {
    double l = 0.0;
    for (Eigen::Index i = 0; i < n && l < best_loss; ++i)
      l += std::max(-y[i] * F.row(i).dot(u), 0.0);
    if (l < best_loss) {
      best_loss = l;
      best = u;
    }
  };
  // hyperspherical coordinates: the last angle spans a full turn in
  // `resolution` steps, the others span [0, pi] in resolution + 1 steps
  std::vector<double> ang(static_cast<std::size_t>(std::max<Eigen::Index>(D - 1, 0)));
  std::function<void(std::size_t)> walk = [&](std::size_t k) {
    if (k == ang.size()) {
      double sinp = 1.0;
      for (Eigen::Index j = 0; j + 1 < D; ++j) {
        u[j] = sinp * std::cos(ang[static_cast<std::size_t>(j)]);
        sinp *= std::sin(ang[static_cast<std::size_t>(j)]);
      }
      u[D - 1] = sinp;
      consider();
      return;
    }
    const bool last = k + 1 == ang.size();
    const int steps = last ? resolution : resolution + 1;
    for (int i = 0; i < steps; ++i) {
      ang[k] = last ? 2.0 * pi * i / resolution : pi * i / resolution;
      walk(k + 1);
    }
  };
  if (D == 1) {
    for (double sgn : {1.0, -1.0}) {
      u[0] = sgn;
      consider();
    }
  } else {
    walk(0);
  }
  return BruteForceResult{make_primal(spec, d, best), best_loss};
}

PrimalModel brute_force_fit(const TeachingSet& ts, const KernelSpec& spec, int resolution) {
  return brute_force_fit_detailed(ts, spec, resolution).model;
}

}  // namespace kt
