#include "kt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kt/error.hpp"

namespace kt {

std::vector<Vector> extend_orthogonal_basis(const Vector& theta) {
  const Eigen::Index d = theta.size();
  if (d < 1) throw InvalidArgument("theta is empty");
  if (!theta.allFinite()) throw InvalidArgument("theta is not finite");
  const double n = theta.norm();
  if (n == 0.0) throw InvalidArgument("theta is the zero vector");

  Eigen::Index drop = 0;
  theta.cwiseAbs().maxCoeff(&drop);

  std::vector<Vector> basis;
  basis.reserve(static_cast<std::size_t>(d - 1));
  const Vector u = theta / n;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (i == drop) continue;
    Vector v = Vector::Unit(d, i);
    // two passes of modified Gram-Schmidt
    for (int pass = 0; pass < 2; ++pass) {
      v -= u.dot(v) * u;
      for (const auto& b : basis) v -= b.dot(v) * b;
    }
    v.normalize();
    basis.push_back(std::move(v));
  }
  return basis;
}

Matrix cross_kernel(const KernelSpec& spec, const std::vector<Vector>& a,
                    const std::vector<Vector>& b) {
  Matrix k(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          eval_kernel(spec, a[i], b[j]);
  return k;
}

GramMatrix gram_matrix(const KernelSpec& spec, const std::vector<Vector>& points) {
  if (points.empty()) throw InvalidArgument("gram matrix of an empty point set");
  const auto d = points.front().size();
  for (const auto& p : points)
    if (p.size() != d) throw InvalidArgument("gram matrix points differ in dimension");
  const auto n = static_cast<Eigen::Index>(points.size());
  GramMatrix g{Matrix(n, n), points, spec};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = eval_kernel(spec, points[i], points[j]);
      g.entries(i, j) = v;
      g.entries(j, i) = v;
    }
  }
  return g;
}

SolveResult solve_positive_definite(const Matrix& M, const Vector& rhs,
                                    double pivot_tol) {
  const Eigen::Index n = M.rows();
  if (M.cols() != n) throw InvalidArgument("matrix is not square");
  if (rhs.size() != n) throw InvalidArgument("right-hand side length mismatch");
  if (n == 0) return SolveResult{};
  if (!M.isApprox(M.transpose(), 1e-12))
    throw InvalidArgument("matrix is not symmetric");

  // Plain left-looking Cholesky so the failing pivot index is known.
  Matrix L = Matrix::Zero(n, n);
  const double scale = M.diagonal().cwiseAbs().maxCoeff();
  double pmin = std::numeric_limits<double>::infinity();
  double pmax = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    double diag = M(j, j) - L.row(j).head(j).squaredNorm();
    if (!(diag > pivot_tol * scale))
      throw SingularMatrix("matrix is numerically singular at pivot " +
                               std::to_string(j) + " (pivot " +
                               std::to_string(diag) + ")",
                           static_cast<std::size_t>(j));
    const double ljj = std::sqrt(diag);
    L(j, j) = ljj;
    pmin = std::min(pmin, diag);
    pmax = std::max(pmax, diag);
    for (Eigen::Index i = j + 1; i < n; ++i)
      L(i, j) = (M(i, j) - L.row(i).head(j).dot(L.row(j).head(j))) / ljj;
  }
  auto tri = L.triangularView<Eigen::Lower>();
  Vector x = tri.solve(rhs);
  L.transpose().triangularView<Eigen::Upper>().solveInPlace(x);

  // one step of iterative refinement
  Vector r = rhs - M * x;
  Vector dx = tri.solve(r);
  L.transpose().triangularView<Eigen::Upper>().solveInPlace(dx);
  x += dx;

  SolveResult out;
  out.x = std::move(x);
  out.residual_inf = (M * out.x - rhs).cwiseAbs().maxCoeff();
  out.min_pivot = pmin;
  out.condition = pmax / pmin;
  return out;
}

SolveResult solve_positive_definite(const GramMatrix& M, const Vector& rhs,
                                    double pivot_tol) {
  return solve_positive_definite(M.entries, rhs, pivot_tol);
}

Selection select_independent_detailed(const std::vector<Vector>& vectors,
                                      std::size_t target_count,
                                      double pivot_tol) {
  Selection sel;
  if (target_count == 0) return sel;
  if (vectors.empty()) throw InvalidArgument("no vectors to select from");
  if (!(pivot_tol > 0.0)) throw InvalidArgument("pivot tolerance must be positive");
  const auto len = vectors.front().size();
  double largest = 0.0;
  for (const auto& v : vectors) {
    if (v.size() != len) throw InvalidArgument("vectors differ in length");
    largest = std::max(largest, v.norm());
  }
  if (largest == 0.0) return sel;
  const double tol = pivot_tol * largest;

  std::vector<Vector> q;
  for (std::size_t i = 0; i < vectors.size() && sel.indices.size() < target_count;
       ++i) {
    Vector w = vectors[i];
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : q) w -= b.dot(w) * b;
    const double res = w.norm();
    if (res > tol) {
      q.push_back(w / res);
      sel.indices.push_back(i);
      sel.residuals.push_back(res);
    }
  }
  return sel;
}

std::vector<std::size_t> select_independent(const std::vector<Vector>& vectors,
                                            std::size_t target_count,
                                            double pivot_tol) {
  return select_independent_detailed(vectors, target_count, pivot_tol).indices;
}

std::vector<std::size_t> select_independent(
    const std::vector<FeatureVector>& vectors, std::size_t target_count,
    double pivot_tol) {
  std::vector<Vector> raw;
  raw.reserve(vectors.size());
  for (const auto& f : vectors) raw.push_back(f.coords);
  return select_independent(raw, target_count, pivot_tol);
}

Eigen::Index numerical_rank(const Matrix& A, double rel_tol) {
  if (A.size() == 0) return 0;
  Eigen::ColPivHouseholderQR<Matrix> qr(A);
  qr.setThreshold(rel_tol);
  return qr.rank();
}

}  // namespace kt
