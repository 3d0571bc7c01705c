#pragma once

#include <vector>

#include "kt/kernel.hpp"

namespace kt {

struct GramMatrix {
  Matrix entries;
  std::vector<Vector> points;
  KernelSpec spec;

  Eigen::Index size() const { return entries.rows(); }
};

std::vector<Vector> extend_orthogonal_basis(const Vector& theta);

GramMatrix gram_matrix(const KernelSpec& spec, const std::vector<Vector>& points);
// Cross kernel matrix K[i][j] = K(a_i, b_j).
Matrix cross_kernel(const KernelSpec& spec, const std::vector<Vector>& a,
                    const std::vector<Vector>& b);

struct SolveResult {
  Vector x;
  double residual_inf = 0.0;  // ||M x - rhs||_inf
  double condition = 0.0;     // squared ratio of extreme Cholesky pivots
  double min_pivot = 0.0;
};

// Cholesky without fallback. A pivot below pivot_tol * max diagonal throws
// SingularMatrix carrying the pivot's index.
SolveResult solve_positive_definite(const Matrix& M, const Vector& rhs,
                                    double pivot_tol = 1e-14);
SolveResult solve_positive_definite(const GramMatrix& M, const Vector& rhs,
                                    double pivot_tol = 1e-14);

struct Selection {
  std::vector<std::size_t> indices;
  std::vector<double> residuals;  // residual norm of each accepted vector
};

// Greedy modified Gram-Schmidt in input order. A vector is accepted when its
// residual exceeds pivot_tol times the largest input norm.
Selection select_independent_detailed(const std::vector<Vector>& vectors,
                                      std::size_t target_count,
                                      double pivot_tol = 1e-8);
std::vector<std::size_t> select_independent(const std::vector<Vector>& vectors,
                                            std::size_t target_count,
                                            double pivot_tol = 1e-8);
std::vector<std::size_t> select_independent(
    const std::vector<FeatureVector>& vectors, std::size_t target_count,
    double pivot_tol = 1e-8);

// Numerical rank of the columns of A by column-pivoted QR.
Eigen::Index numerical_rank(const Matrix& A, double rel_tol = 1e-8);

}  // namespace kt
