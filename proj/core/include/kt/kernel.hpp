#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace kt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class KernelFamily { Linear, Polynomial, Gaussian, TruncatedGaussian };

std::string to_string(KernelFamily f);
KernelFamily family_from_string(const std::string& name);

struct KernelSpec {
  KernelFamily family = KernelFamily::Linear;
  int degree = 1;      // Polynomial
  double sigma = 1.0;  // Gaussian, TruncatedGaussian
  int truncation = 0;  // TruncatedGaussian

  static KernelSpec linear();
  static KernelSpec polynomial(int k);
  static KernelSpec gaussian(double sigma);
  static KernelSpec truncated_gaussian(double sigma, int s);

  // Throws InvalidArgument on k < 1, sigma <= 0 or s < 0.
  void validate() const;
  bool finite_dimensional() const { return family != KernelFamily::Gaussian; }

  bool operator==(const KernelSpec&) const = default;
};

double eval_kernel(const KernelSpec& spec, const Vector& x, const Vector& x2);

// Exact in 64 bits while the value fits, otherwise rounded from log space.
double binomial(int n, int k);
double log_factorial(int n);

std::int64_t feature_dim(const KernelSpec& spec, int d);

struct MultiIndex {
  std::vector<int> lambda;

  int order() const;
  bool operator==(const MultiIndex&) const = default;
};

// All exponent vectors of the given order, lexicographically descending.
std::vector<MultiIndex> multi_indices(int d, int order);

// Coordinate layout of a feature vector: graded, each grade in
// multi_indices order.
struct FeatureLayout {
  int d = 0;
  std::vector<MultiIndex> entries;

  std::size_t size() const { return entries.size(); }
  // Position of lambda, or -1 if it is not part of this layout.
  std::ptrdiff_t position(const MultiIndex& lambda) const;
};

struct FeatureVector {
  Vector coords;
  std::shared_ptr<const FeatureLayout> index_map;

  Eigen::Index size() const { return coords.size(); }
  double operator[](Eigen::Index i) const { return coords[i]; }
};

// Precomputed explicit feature map for a finite-dimensional spec.
class FeatureMap {
 public:
  FeatureMap(const KernelSpec& spec, int d);

  const KernelSpec& spec() const { return spec_; }
  int input_dim() const { return d_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(layout_->size()); }
  const std::shared_ptr<const FeatureLayout>& layout() const { return layout_; }

  Vector operator()(const Vector& x) const;
  FeatureVector map(const Vector& x) const;
  // Row i of the result is the image of column i of xs.
  Matrix map_columns(const Matrix& xs) const;

 private:
  void fill(const double* x, double* out, std::vector<double>& powers) const;

  KernelSpec spec_;
  int d_;
  int max_order_;
  std::shared_ptr<const FeatureLayout> layout_;
  std::vector<double> scale_;
  std::vector<int> exps_;  // layout flattened, d entries per coordinate
};

FeatureVector poly_feature_map(int d, int k, const Vector& x);
FeatureVector truncated_gaussian_feature_map(int d, double sigma, int s,
                                             const Vector& x);

struct ApproxConfig {
  int d = 2;
  double epsilon = 0.1;
  double R = 2.0;
  int s = 0;
  double epsilon_s = 0.1;
  double ball_radius_factor = 4.0;
  double anchor_Q = 1.0;
  double coherence_target = 0.5;

  // Radius of the ball teaching points are drawn from.
  double teaching_radius(double sigma) const;
  // Radius of the input space, |x|^2 / sigma^2 <= 2 sqrt(R).
  double input_radius(double sigma) const;
  std::int64_t truncated_dim() const;
};

ApproxConfig choose_truncation(double epsilon, int d);
// Config for a caller supplied order. R = max(s / e^2, d) and epsilon is
// the value the order would have been chosen for, exp(-sqrt(s)).
ApproxConfig config_for_order(int s, int d);

double taylor_tail_bound(double norm_x, double norm_x2, double sigma, int s);

}  // namespace kt
