#include "kt/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "kt/error.hpp"

namespace kt {

namespace {

void check_pair(const Vector& x, const Vector& x2) {
  if (x.size() != x2.size())
    throw InvalidArgument("kernel arguments differ in dimension (" +
                          std::to_string(x.size()) + " vs " +
                          std::to_string(x2.size()) + ")");
  if (x.size() < 1) throw InvalidArgument("kernel arguments are empty");
  if (!x.allFinite() || !x2.allFinite())
    throw InvalidArgument("kernel argument is not finite");
}

void enumerate(int d, int order, int pos, std::vector<int>& cur,
               std::vector<MultiIndex>& out) {
  if (pos == d - 1) {
    cur[pos] = order;
    out.push_back(MultiIndex{cur});
    return;
  }
  for (int first = order; first >= 0; --first) {
    cur[pos] = first;
    enumerate(d, order - first, pos + 1, cur, out);
  }
}

std::shared_ptr<const FeatureLayout> cached_layout(int d, int lo, int hi) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const FeatureLayout>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(d, lo, hi);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto layout = std::make_shared<FeatureLayout>();
  layout->d = d;
  for (int k = lo; k <= hi; ++k) {
    auto grade = multi_indices(d, k);
    layout->entries.insert(layout->entries.end(), grade.begin(), grade.end());
  }
  cache.emplace(key, layout);
  return layout;
}

double sum_log_factorials(const MultiIndex& m) {
  double acc = 0.0;
  for (int l : m.lambda) acc += log_factorial(l);
  return acc;
}

}  // namespace

std::string to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::Linear: return "linear";
    case KernelFamily::Polynomial: return "polynomial";
    case KernelFamily::Gaussian: return "gaussian";
    case KernelFamily::TruncatedGaussian: return "truncated_gaussian";
  }
  return "unknown";
}

KernelFamily family_from_string(const std::string& name) {
  if (name == "linear") return KernelFamily::Linear;
  if (name == "polynomial") return KernelFamily::Polynomial;
  if (name == "gaussian") return KernelFamily::Gaussian;
  if (name == "truncated_gaussian") return KernelFamily::TruncatedGaussian;
  throw InvalidArgument("unknown kernel family '" + name + "'");
}

KernelSpec KernelSpec::linear() { return KernelSpec{}; }

KernelSpec KernelSpec::polynomial(int k) {
  KernelSpec s;
  s.family = KernelFamily::Polynomial;
  s.degree = k;
  s.validate();
  return s;
}

KernelSpec KernelSpec::gaussian(double sigma) {
  KernelSpec s;
  s.family = KernelFamily::Gaussian;
  s.sigma = sigma;
  s.validate();
  return s;
}

KernelSpec KernelSpec::truncated_gaussian(double sigma, int trunc) {
  KernelSpec s;
  s.family = KernelFamily::TruncatedGaussian;
  s.sigma = sigma;
  s.truncation = trunc;
  s.validate();
  return s;
}

void KernelSpec::validate() const {
  if (degree < 1) throw InvalidArgument("polynomial degree must be >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InvalidArgument("sigma must be positive");
  if (truncation < 0) throw InvalidArgument("truncation order must be >= 0");
}

double eval_kernel(const KernelSpec& spec, const Vector& x, const Vector& x2) {
  check_pair(x, x2);
  switch (spec.family) {
    case KernelFamily::Linear:
      return x.dot(x2);
    case KernelFamily::Polynomial:
      return std::pow(x.dot(x2), spec.degree);
    case KernelFamily::Gaussian:
      return std::exp(-(x - x2).squaredNorm() / (2.0 * spec.sigma * spec.sigma));
    case KernelFamily::TruncatedGaussian: {
      const double s2 = spec.sigma * spec.sigma;
      const double u = x.dot(x2) / s2;
      // Horner on sum_{j<=s} u^j / j!
      double acc = 1.0;
      for (int j = spec.truncation; j >= 1; --j) acc = 1.0 + acc * u / j;
      return std::exp(-(x.squaredNorm() + x2.squaredNorm()) / (2.0 * s2)) * acc;
    }
  }
  throw InvalidArgument("unknown kernel family");
}

double log_factorial(int n) {
  if (n < 0) throw InvalidArgument("factorial of a negative number");
  static const auto table = [] {
    std::array<double, 21> t{};
    std::uint64_t f = 1;
    t[0] = 0.0;
    for (int i = 1; i <= 20; ++i) {
      f *= static_cast<std::uint64_t>(i);
      t[i] = std::log(static_cast<double>(f));
    }
    return t;
  }();
  if (n <= 20) return table[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  std::uint64_t acc = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    // acc * num / i stays exact because acc * num is divisible by i
    if (acc > std::numeric_limits<std::uint64_t>::max() / num)
      return std::round(std::exp(log_factorial(n) - log_factorial(k) -
                                 log_factorial(n - k)));
    acc = acc * num / static_cast<std::uint64_t>(i);
  }
  return static_cast<double>(acc);
}

std::int64_t feature_dim(const KernelSpec& spec, int d) {
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  switch (spec.family) {
    case KernelFamily::Linear: return d;
    case KernelFamily::Polynomial:
      return static_cast<std::int64_t>(binomial(d + spec.degree - 1, spec.degree));
    case KernelFamily::TruncatedGaussian:
      return static_cast<std::int64_t>(binomial(d + spec.truncation, spec.truncation));
    case KernelFamily::Gaussian:
      throw InvalidArgument("gaussian kernel is infinite-dimensional");
  }
  throw InvalidArgument("unknown kernel family");
}

int MultiIndex::order() const {
  int o = 0;
  for (int l : lambda) o += l;
  return o;
}

std::vector<MultiIndex> multi_indices(int d, int order) {
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  if (order < 0) throw InvalidArgument("order must be >= 0");
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(binomial(d + order - 1, order)));
  std::vector<int> cur(d, 0);
  enumerate(d, order, 0, cur, out);
  return out;
}

std::ptrdiff_t FeatureLayout::position(const MultiIndex& lambda) const {
  auto it = std::find(entries.begin(), entries.end(), lambda);
  return it == entries.end() ? -1 : std::distance(entries.begin(), it);
}

FeatureMap::FeatureMap(const KernelSpec& spec, int d) : spec_(spec), d_(d) {
  spec.validate();
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  int lo = 1;
  switch (spec.family) {
    case KernelFamily::Linear: lo = max_order_ = 1; break;
    case KernelFamily::Polynomial: lo = max_order_ = spec.degree; break;
    case KernelFamily::TruncatedGaussian:
      lo = 0;
      max_order_ = spec.truncation;
      break;
    case KernelFamily::Gaussian:
      throw InvalidArgument("gaussian kernel is infinite-dimensional");
  }
  layout_ = cached_layout(d, lo, max_order_);

  scale_.reserve(layout_->size());
  exps_.reserve(layout_->size() * d);
  for (const auto& m : layout_->entries) {
    double sc = 1.0;
    if (spec.family == KernelFamily::Polynomial) {
      sc = std::exp(0.5 * (log_factorial(spec.degree) - sum_log_factorials(m)));
    } else if (spec.family == KernelFamily::TruncatedGaussian) {
      sc = std::exp(-m.order() * std::log(spec.sigma) - 0.5 * sum_log_factorials(m));
    }
    scale_.push_back(sc);
    exps_.insert(exps_.end(), m.lambda.begin(), m.lambda.end());
  }
}

void FeatureMap::fill(const double* x, double* out,
                      std::vector<double>& powers) const {
  const int stride = max_order_ + 1;
  powers.resize(static_cast<std::size_t>(d_ * stride));
  for (int j = 0; j < d_; ++j) {
    double* p = powers.data() + j * stride;
    p[0] = 1.0;
    for (int e = 1; e <= max_order_; ++e) p[e] = p[e - 1] * x[j];
  }
  double pre = 1.0;
  if (spec_.family == KernelFamily::TruncatedGaussian) {
    double sq = 0.0;
    for (int j = 0; j < d_; ++j) sq += x[j] * x[j];
    pre = std::exp(-sq / (2.0 * spec_.sigma * spec_.sigma));
  }
  const std::size_t n = scale_.size();
  const int* e = exps_.data();
  for (std::size_t i = 0; i < n; ++i, e += d_) {
    double v = scale_[i] * pre;
    for (int j = 0; j < d_; ++j) v *= powers[j * stride + e[j]];
    out[i] = v;
  }
}

Vector FeatureMap::operator()(const Vector& x) const {
  if (x.size() != d_)
    throw InvalidArgument("feature map expects dimension " + std::to_string(d_) +
                          ", got " + std::to_string(x.size()));
  Vector out(dim());
  std::vector<double> powers;
  fill(x.data(), out.data(), powers);
  return out;
}

FeatureVector FeatureMap::map(const Vector& x) const {
  return FeatureVector{(*this)(x), layout_};
}

Matrix FeatureMap::map_columns(const Matrix& xs) const {
  if (xs.rows() != d_)
    throw InvalidArgument("feature map expects dimension " + std::to_string(d_));
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out(
      xs.cols(), dim());
  std::vector<double> powers;
  for (Eigen::Index c = 0; c < xs.cols(); ++c) {
    Vector col = xs.col(c);
    fill(col.data(), out.row(c).data(), powers);
  }
  return out;
}

FeatureVector poly_feature_map(int d, int k, const Vector& x) {
  return FeatureMap(KernelSpec::polynomial(k), d).map(x);
}

FeatureVector truncated_gaussian_feature_map(int d, double sigma, int s,
                                             const Vector& x) {
  return FeatureMap(KernelSpec::truncated_gaussian(sigma, s), d).map(x);
}

double ApproxConfig::teaching_radius(double sigma) const {
  return ball_radius_factor * std::sqrt(R) * sigma;
}

double ApproxConfig::input_radius(double sigma) const {
  return sigma * std::sqrt(2.0 * std::sqrt(R));
}

std::int64_t ApproxConfig::truncated_dim() const {
  return static_cast<std::int64_t>(binomial(d + s, s));
}

namespace {

// log of R^(s+1) / (s+1)!
double log_remainder(double R, int s) {
  return (s + 1) * std::log(R) - log_factorial(s + 1);
}

void finish_config(ApproxConfig& c) {
  c.epsilon_s = c.epsilon / std::pow(std::sqrt(static_cast<double>(c.d)), c.s);
  const double r = static_cast<double>(c.truncated_dim());
  c.coherence_target = r > 1.0 ? 1.0 / (2.0 * (r - 1.0)) : 1.0;
}

}  // namespace

ApproxConfig choose_truncation(double epsilon, int d) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw InvalidArgument("epsilon must lie in (0, 1)");
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  constexpr double e2 = std::numbers::e * std::numbers::e;
  ApproxConfig c;
  c.d = d;
  c.epsilon = epsilon;
  const double l = std::log(1.0 / epsilon);
  c.R = std::max(l * l / e2, static_cast<double>(d));
  c.s = static_cast<int>(std::ceil(e2 * c.R));
  const double log_eps = std::log(epsilon);
  int guard = 0;
  while (log_remainder(c.R, c.s) > log_eps) {
    if (++guard > 100000) throw InvalidArgument("truncation search diverged");
    ++c.s;
  }
  finish_config(c);
  return c;
}

ApproxConfig config_for_order(int s, int d) {
  if (s < 0) throw InvalidArgument("truncation order must be >= 0");
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  constexpr double e2 = std::numbers::e * std::numbers::e;
  ApproxConfig c;
  c.d = d;
  c.s = s;
  c.R = std::max(s / e2, static_cast<double>(d));
  c.epsilon = std::exp(-std::sqrt(static_cast<double>(s)));
  if (c.epsilon >= 1.0) c.epsilon = std::nextafter(1.0, 0.0);
  finish_config(c);
  return c;
}

double taylor_tail_bound(double norm_x, double norm_x2, double sigma, int s) {
  if (norm_x < 0 || norm_x2 < 0) throw InvalidArgument("norms must be >= 0");
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (s < 0) throw InvalidArgument("truncation order must be >= 0");
  const double z = norm_x * norm_x2 / (sigma * sigma);
  if (z == 0.0) return 0.0;
  return std::exp((s + 1) * std::log(z) - log_factorial(s + 1));
}

}  // namespace kt
