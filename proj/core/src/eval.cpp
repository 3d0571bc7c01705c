#include "kt/eval.hpp"

#include <random>

#include "kt/linalg.hpp"

namespace kt {

namespace {

void same_family(const KernelSpec& a, const KernelSpec& b) {
  if (!(a == b)) throw InvalidArgument("direction_similarity: kernels differ");
}

double clamp_cos(double ab, double aa, double bb) {
  if (!(aa > 0.0) || !(bb > 0.0))
    throw InvalidArgument("direction_similarity: zero-norm model");
  return ab / std::sqrt(aa * bb);
}

}  // namespace

double direction_similarity(const PrimalModel& a, const PrimalModel& b) {
  same_family(a.spec, b.spec);
  if (a.theta.size() != b.theta.size())
    throw InvalidArgument("direction_similarity: feature spaces differ");
  const Vector& u = a.theta.coords;
  const Vector& v = b.theta.coords;
  return clamp_cos(u.dot(v), u.squaredNorm(), v.squaredNorm());
}

double direction_similarity(const DualModel& a, const DualModel& b) {
  same_family(a.spec, b.spec);
  const Matrix kaa = gram_matrix(a.spec, a.centers).entries;
  const Matrix kbb = gram_matrix(b.spec, b.centers).entries;
  const Matrix kab = cross_kernel(a.spec, a.centers, b.centers);
  const Vector& u = a.coefficients;
  const Vector& v = b.coefficients;
  return clamp_cos(u.dot(kab * v), u.dot(kaa * u), v.dot(kbb * v));
}

double direction_similarity(const DualModel& a, const PrimalModel& b) {
  return direction_similarity(to_primal(a), b);
}

double direction_similarity(const PrimalModel& a, const DualModel& b) {
  return direction_similarity(a, to_primal(b));
}

std::vector<Vector> ball_probes(int d, double radius, std::size_t count,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Vector> out;
  out.reserve(count);
  while (out.size() < count) {
    Vector g(d);
    for (int i = 0; i < d; ++i) g[i] = gauss(rng);
    const double n = g.norm();
    if (n == 0.0) continue;
    out.push_back(g * (radius * std::pow(unif(rng), 1.0 / d) / n));
  }
  return out;
}

std::vector<Vector> grid_probes(double half, int count) {
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count) * count);
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j) {
      Vector p(2);
      p << -half + 2.0 * half * (i + 0.5) / count, -half + 2.0 * half * (j + 0.5) / count;
      out.push_back(p);
    }
  return out;
}

}  // namespace kt
