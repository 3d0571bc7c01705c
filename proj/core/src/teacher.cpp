#include "kt/teacher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "kt/error.hpp"
#include "kt/linalg.hpp"

namespace kt {

namespace {

Vector sample_ball(std::mt19937_64& rng, int d, double radius) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector g(d);
  double n = 0.0;
  do {
    for (int i = 0; i < d; ++i) g[i] = gauss(rng);
    n = g.norm();
  } while (n == 0.0);
  return g * (radius * std::pow(unif(rng), 1.0 / d) / n);
}

std::shared_ptr<const FeatureMap> features_of(const PrimalModel& m) {
  return m.features ? m.features : std::make_shared<const FeatureMap>(m.spec, m.d);
}

bool homogeneous(const KernelSpec& spec) {
  return spec.family == KernelFamily::Linear || spec.family == KernelFamily::Polynomial;
}

// Greedy farthest-point order starting from the first candidate.
std::vector<std::size_t> farthest_first(const std::vector<Vector>& pts) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> order;
  if (n == 0) return order;
  order.reserve(n);
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<char> used(n, 0);
  std::size_t cur = 0;
  for (std::size_t step = 0; step < n; ++step) {
    order.push_back(cur);
    used[cur] = 1;
    std::size_t next = n;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      dist[i] = std::min(dist[i], (pts[i] - pts[cur]).squaredNorm());
      if (dist[i] > best) {
        best = dist[i];
        next = i;
      }
    }
    if (next == n) break;
    cur = next;
  }
  return order;
}

std::vector<Vector> unit_images(const FeatureMap& fm, const std::vector<Vector>& pts) {
  std::vector<Vector> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    Vector v = fm(p);
    const double n = v.norm();
    out.push_back(n > 0.0 ? Vector(v / n) : v);
  }
  return out;
}

void push_pair(TeachingSet& ts, const Vector& z) {
  ts.items.push_back({z, 1, Tag::boundary_pos});
  ts.items.push_back({z, -1, Tag::boundary_neg});
}

}  // namespace

std::string to_string(Tag t) {
  switch (t) {
    case Tag::basis: return "basis";
    case Tag::opposite_sum: return "opposite_sum";
    case Tag::anchor: return "anchor";
    case Tag::boundary_pos: return "boundary_pos";
    case Tag::boundary_neg: return "boundary_neg";
  }
  return "unknown";
}

Tag tag_from_string(const std::string& s) {
  if (s == "basis") return Tag::basis;
  if (s == "opposite_sum") return Tag::opposite_sum;
  if (s == "anchor") return Tag::anchor;
  if (s == "boundary_pos") return Tag::boundary_pos;
  if (s == "boundary_neg") return Tag::boundary_neg;
  throw InvalidArgument("unknown tag '" + s + "'");
}

std::string to_string(RConvention c) {
  return c == RConvention::main ? "main" : "appendix";
}

RConvention r_convention_from_string(const std::string& s) {
  if (s == "main") return RConvention::main;
  if (s == "appendix") return RConvention::appendix;
  throw InvalidArgument("unknown r convention '" + s + "'");
}

std::vector<Vector> TeachingSet::boundary_points() const {
  std::vector<Vector> out;
  for (const auto& it : items)
    if (it.tag == Tag::basis || it.tag == Tag::boundary_pos) out.push_back(it.x);
  return out;
}

std::vector<Vector> TeachingSet::anchors() const {
  std::vector<Vector> out;
  for (const auto& it : items)
    if (it.tag == Tag::anchor) out.push_back(it.x);
  return out;
}

std::vector<Vector> TeachingSet::inputs() const {
  std::vector<Vector> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back(it.x);
  return out;
}

void TeachingSet::validate() const {
  const int d = dim();
  std::size_t pos = 0, neg = 0;
  for (const auto& it : items) {
    if (it.x.size() != d) throw InvalidArgument("teaching items differ in dimension");
    if (it.y != 1 && it.y != -1) throw InvalidArgument("teaching label not in {-1,+1}");
    if (it.tag == Tag::boundary_pos) {
      ++pos;
      if (it.y != 1) throw InvalidArgument("boundary_pos item with label -1");
      bool twin = std::any_of(items.begin(), items.end(), [&](const TeachingItem& o) {
        return o.tag == Tag::boundary_neg && o.x == it.x;
      });
      if (!twin) throw InvalidArgument("boundary_pos item without a boundary_neg twin");
    }
    if (it.tag == Tag::boundary_neg) {
      ++neg;
      if (it.y != -1) throw InvalidArgument("boundary_neg item with label +1");
    }
  }
  if (pos != neg) throw InvalidArgument("unpaired boundary items");
}

TeachingSet linear_teaching_set(const Vector& theta_star) {
  if (theta_star.size() < 1) throw InvalidArgument("theta is empty");
  if (theta_star.norm() == 0.0) throw InvalidArgument("theta is the zero vector");
  TeachingSet ts;
  const auto basis = extend_orthogonal_basis(theta_star);
  Vector sum = Vector::Zero(theta_star.size());
  for (const auto& v : basis) {
    ts.items.push_back({v, 1, Tag::basis});
    sum += v;
  }
  if (!basis.empty()) ts.items.push_back({-sum, 1, Tag::opposite_sum});
  ts.items.push_back({theta_star, 1, Tag::anchor});
  return ts;
}

BoundarySearch search_boundary(const PrimalModel& theta, std::size_t count,
                               std::uint64_t rng_seed, const SearchConfig& search) {
  BoundarySearch out;
  if (count == 0) return out;
  if (!(search.radius > 0.0)) throw InvalidArgument("search radius must be positive");
  const auto fm = features_of(theta);
  const Vector& w = theta.theta.coords;
  auto f = [&](const Vector& x) { return w.dot((*fm)(x)); };
  const bool homog = homogeneous(theta.spec);
  const int degree = theta.spec.family == KernelFamily::Linear ? 1 : theta.spec.degree;
  // value after moving x onto the sphere, where homogeneous roots end up
  auto settled = [&](const Vector& x, double fx) {
    if (!homog) return fx;
    const double n = x.norm();
    return n > 0.0 ? fx * std::pow(search.radius / n, degree) : fx;
  };

  std::mt19937_64 rng(rng_seed);
  const std::size_t pool_target =
      std::max(count * std::max<std::size_t>(search.pool_factor, 1), count + 8);
  std::vector<Vector> pool;
  out.min_sampled = std::numeric_limits<double>::infinity();
  out.max_sampled = -std::numeric_limits<double>::infinity();

  while (out.chords < search.chord_budget && pool.size() < pool_target) {
    Vector a = sample_ball(rng, theta.d, search.radius);
    Vector b = sample_ball(rng, theta.d, search.radius);
    ++out.chords;
    double fa = f(a), fb = f(b);
    out.min_sampled = std::min({out.min_sampled, fa, fb});
    out.max_sampled = std::max({out.max_sampled, fa, fb});
    if (!(fa * fb < 0.0)) continue;
    ++out.sign_changes;
    const double tol = search.root_tol * std::max(std::abs(fa), std::abs(fb));
    Vector lo = a, hi = b, mid = a;
    for (int it = 0; it < search.max_bisections; ++it) {
      mid = 0.5 * (lo + hi);
      const double fmid = f(mid);
      if (std::abs(settled(mid, fmid)) <= tol) break;
      if ((fmid < 0.0) == (fa < 0.0)) {
        lo = mid;
      } else {
        hi = mid;
      }
      if ((hi - lo).norm() <= 1e-16 * search.radius) break;
    }
    if (homog) {
      // the zero set is a cone; move the root onto the sphere
      const double n = mid.norm();
      if (n < 1e-6 * search.radius) continue;
      mid *= search.radius / n;
    }
    pool.push_back(std::move(mid));
  }
  out.candidates = pool.size();
  if (pool.empty()) return out;

  const auto order = farthest_first(pool);
  std::vector<Vector> ordered;
  ordered.reserve(order.size());
  for (auto i : order) ordered.push_back(pool[i]);
  const auto sel =
      select_independent_detailed(unit_images(*fm, ordered), count, search.pivot_tol);
  out.independent = sel.indices.size();
  out.residuals = sel.residuals;
  std::vector<char> taken(ordered.size(), 0);
  for (auto i : sel.indices) {
    out.points.push_back(ordered[i]);
    taken[i] = 1;
  }
  if (!search.require_full_rank) {
    for (std::size_t i = 0; i < ordered.size() && out.points.size() < count; ++i) {
      if (taken[i]) continue;
      bool dup = std::any_of(out.points.begin(), out.points.end(), [&](const Vector& p) {
        return (p - ordered[i]).norm() <= 1e-12 * search.radius;
      });
      if (!dup) out.points.push_back(ordered[i]);
    }
  }
  for (const auto& z : out.points)
    out.worst_root_value = std::max(out.worst_root_value, std::abs(f(z)));
  return out;
}

std::vector<Vector> polynomial_boundary_points(const PrimalModel& theta_tilde, int d,
                                               int k, std::size_t count,
                                               std::uint64_t rng_seed,
                                               const SearchConfig& search) {
  if (theta_tilde.spec.family != KernelFamily::Polynomial ||
      theta_tilde.spec.degree != k || theta_tilde.d != d)
    throw InvalidArgument("theta does not live in the degree-" + std::to_string(k) +
                          " polynomial feature space of dimension " + std::to_string(d));
  if (count == 0) return {};
  SearchConfig cfg = search;
  cfg.require_full_rank = true;
  auto res = search_boundary(theta_tilde, count, rng_seed, cfg);
  if (res.independent < count)
    throw SamplerExhausted("found " + std::to_string(res.independent) + " of " +
                               std::to_string(count) +
                               " independent boundary points (" +
                               std::to_string(res.sign_changes) +
                               " sign changes in " + std::to_string(res.chords) +
                               " chords)",
                           res.independent, count);
  return res.points;
}

PolynomialTeaching polynomial_teaching_set(const PrimalModel& theta_tilde, int d, int k,
                                           std::uint64_t rng_seed) {
  if (theta_tilde.theta.coords.norm() == 0.0)
    throw InvalidArgument("theta is the zero vector");
  const auto r = static_cast<std::size_t>(feature_dim(KernelSpec::polynomial(k), d));
  auto zs = polynomial_boundary_points(theta_tilde, d, k, r - 1, rng_seed);

  // Anchor: the best of a batch of sphere samples.
  std::mt19937_64 rng(rng_seed ^ 0x9e3779b97f4a7c15ULL);
  Vector best;
  double best_val = 0.0;
  for (int i = 0; i < 10000; ++i) {
    Vector a = sample_ball(rng, d, 1.0);
    a.normalize();
    const double v = theta_tilde.decision_value(a);
    if (v > best_val) {
      best_val = v;
      best = a;
    }
  }
  if (!(best_val > 0.0))
    throw SamplerExhausted("no point with positive margin found", 0, 1);

  PolynomialTeaching out;
  for (const auto& z : zs) push_pair(out.set, z);
  out.set.items.push_back({best, 1, Tag::anchor});
  out.report = check_assumptions(out.set, theta_tilde);
  return out;
}

PrimalModel counterexample_theta(int d, int k) {
  FeatureMap fm(KernelSpec::polynomial(k), d);
  Vector theta = Vector::Zero(fm.dim());
  for (int i = 0; i < d; ++i) theta += fm(Vector::Unit(d, i)) / std::sqrt(double(d));
  return make_primal(KernelSpec::polynomial(k), d, theta);
}

SearchConfig GaussianTeachConfig::default_gaussian_search() {
  SearchConfig s;
  s.require_full_rank = false;
  s.chord_budget = 200000;
  s.pool_factor = 6;
  return s;
}

GaussianTeaching gaussian_teaching_set(const DualModel& theta_star, double epsilon,
                                       std::uint64_t rng_seed) {
  GaussianTeachConfig cfg;
  cfg.epsilon = epsilon;
  return gaussian_teaching_set(theta_star, cfg, rng_seed);
}

GaussianTeaching gaussian_teaching_set(const DualModel& theta_star,
                                       const GaussianTeachConfig& cfg,
                                       std::uint64_t rng_seed) {
  if (theta_star.spec.family != KernelFamily::Gaussian)
    throw InvalidArgument("gaussian_teaching_set needs a gaussian model");
  if (theta_star.centers.empty()) throw InvalidArgument("model has no centers");
  const int d = theta_star.input_dim();
  const double sigma = theta_star.spec.sigma;

  GaussianTeaching out;
  out.config = cfg.s ? config_for_order(*cfg.s, d) : choose_truncation(cfg.epsilon, d);
  out.config.ball_radius_factor = cfg.ball_factor;
  out.config.anchor_Q = cfg.anchor_Q;
  const double radius = out.config.teaching_radius(sigma);
  for (const auto& c : theta_star.centers)
    if (c.norm() > radius)
      throw InvalidArgument("model center lies outside the teaching ball");

  PrimalModel tt = project_truncated(theta_star, out.config.s);
  const double tn = tt.theta.coords.norm();
  if (tn == 0.0) throw InvalidArgument("truncated model is zero");
  tt.theta.coords /= tn;
  out.theta_tilde = tt;

  const auto count = static_cast<std::size_t>(out.config.truncated_dim() - 1);
  SearchConfig search = cfg.search;
  search.radius = radius;
  auto found = search_boundary(tt, count, rng_seed, search);
  if (found.points.size() < count || (search.require_full_rank && found.independent < count))
    throw SamplerExhausted("found " + std::to_string(found.independent) +
                               " independent boundary points of " +
                               std::to_string(count) + " (" +
                               std::to_string(found.points.size()) + " roots)",
                           found.independent, count);

  // Anchor search over one batch of ball samples.
  std::mt19937_64 rng(rng_seed ^ 0xd1b54a32d192ed03ULL);
  const auto fm = features_of(tt);
  std::vector<Vector> samples;
  std::vector<double> values;
  samples.reserve(cfg.anchor_budget);
  values.reserve(cfg.anchor_budget);
  for (std::size_t i = 0; i < cfg.anchor_budget; ++i) {
    samples.push_back(sample_ball(rng, d, radius));
    values.push_back(tt.theta.coords.dot((*fm)(samples.back())));
  }
  const KernelSpec gauss = KernelSpec::gaussian(sigma);
  const double bound = cfg.anchor_Q * out.config.epsilon;
  auto pick = [&](int side) -> std::pair<Vector, double> {
    double extreme = 0.0;
    for (double v : values) extreme = std::max(extreme, side * v);
    if (!(extreme > 0.0))
      throw SamplerExhausted("no anchor candidate with the required sign", 0, 1);
    const double thresh = cfg.margin_frac * extreme;
    std::size_t best = samples.size();
    double best_leak = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (side * values[i] < thresh) continue;
      double leak = 0.0;
      for (const auto& z : found.points) {
        leak = std::max(leak, eval_kernel(gauss, samples[i], z));
        if (leak >= best_leak) break;
      }
      if (leak < best_leak) {
        best_leak = leak;
        best = i;
      }
    }
    if (cfg.strict_anchor && best_leak > bound)
      throw SamplerExhausted("no anchor with leakage below Q*epsilon", 0, 1);
    return {samples[best], best_leak};
  };

  for (const auto& z : found.points) push_pair(out.set, z);
  out.set.items.push_back({pick(1).first, 1, Tag::anchor});
  if (cfg.convention == RConvention::appendix)
    out.set.items.push_back({pick(-1).first, -1, Tag::anchor});

  out.report = check_assumptions(out.set, tt, out.config, search.pivot_tol);
  return out;
}

ClosedForm closed_form_certificate(const TeachingSet& ts, double sigma) {
  ts.validate();
  std::vector<Vector> pts = ts.boundary_points();
  const std::size_t nb = pts.size();
  Vector nu = Vector::Zero(static_cast<Eigen::Index>(nb));
  for (const auto& it : ts.items) {
    if (it.tag != Tag::anchor) continue;
    pts.push_back(it.x);
    nu.conservativeResize(nu.size() + 1);
    nu[nu.size() - 1] = it.y;
  }
  if (pts.size() == nb) throw InvalidArgument("teaching set has no anchor");

  const KernelSpec spec = KernelSpec::gaussian(sigma);
  const auto g = gram_matrix(spec, pts);
  const auto sol = solve_positive_definite(g, nu);
  ClosedForm out;
  out.eta = sol.x;
  out.residual_inf = sol.residual_inf;
  out.condition = sol.condition;
  out.beta0 = out.eta.dot(g.entries * out.eta);
  if (!(out.beta0 > 0.0)) throw Error("closed form: non-positive norm");
  out.model = DualModel{spec, pts, out.eta / std::sqrt(out.beta0)};
  return out;
}

DualModel closed_form_dual(const TeachingSet& ts, double sigma) {
  return closed_form_certificate(ts, sigma).model;
}

AssumptionReport check_assumptions(const TeachingSet& ts, const PrimalModel& theta_tilde,
                                   const std::optional<ApproxConfig>& config,
                                   double pivot_tol) {
  AssumptionReport rep;
  const auto fm = features_of(theta_tilde);
  rep.requested_rank = static_cast<int>(fm->dim()) - 1;
  rep.coherence_bound =
      rep.requested_rank > 0 ? 1.0 / (2.0 * rep.requested_rank) : 1.0;

  const auto zs = ts.boundary_points();
  if (!zs.empty()) {
    const auto units = unit_images(*fm, zs);
    const auto sel = select_independent_detailed(
        units, static_cast<std::size_t>(std::max(rep.requested_rank, 0)), pivot_tol);
    rep.achieved_rank = static_cast<int>(sel.indices.size());
    rep.min_pivot = sel.residuals.empty()
                        ? 0.0
                        : *std::min_element(sel.residuals.begin(), sel.residuals.end());
    for (std::size_t i = 0; i < units.size(); ++i)
      for (std::size_t j = i + 1; j < units.size(); ++j)
        rep.max_coherence = std::max(rep.max_coherence, std::abs(units[i].dot(units[j])));
  }

  KernelSpec leak_spec = theta_tilde.spec;
  if (theta_tilde.spec.family == KernelFamily::TruncatedGaussian)
    leak_spec = KernelSpec::gaussian(theta_tilde.spec.sigma);
  rep.anchor_margin = std::numeric_limits<double>::infinity();
  bool any_anchor = false;
  for (const auto& it : ts.items) {
    if (it.tag != Tag::anchor) continue;
    any_anchor = true;
    rep.anchor_margin = std::min(rep.anchor_margin, it.y * theta_tilde.decision_value(it.x));
    for (const auto& z : zs)
      rep.anchor_leakage = std::max(rep.anchor_leakage, eval_kernel(leak_spec, it.x, z));
  }
  if (!any_anchor) rep.anchor_margin = 0.0;

  rep.assumption1_ok = rep.achieved_rank == rep.requested_rank;
  rep.smoothness_ok = rep.max_coherence <= rep.coherence_bound;
  rep.anchor_ok = rep.anchor_margin > 0.0;
  if (config) {
    rep.leakage_bound = config->anchor_Q * config->epsilon;
    rep.anchor_ok = rep.anchor_ok && rep.anchor_leakage <= rep.leakage_bound;
  }
  return rep;
}

}  // namespace kt
