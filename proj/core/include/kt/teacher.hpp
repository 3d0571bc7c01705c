#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kt/kernel.hpp"
#include "kt/model.hpp"

namespace kt {

enum class Tag { basis, opposite_sum, anchor, boundary_pos, boundary_neg };

std::string to_string(Tag t);
Tag tag_from_string(const std::string& s);

struct TeachingItem {
  Vector x;
  int y = 1;
  Tag tag = Tag::anchor;
};

struct TeachingSet {
  std::vector<TeachingItem> items;

  std::size_t size() const { return items.size(); }
  int dim() const { return items.empty() ? 0 : static_cast<int>(items.front().x.size()); }
  // Distinct boundary points in order of appearance (basis items for the
  // linear construction).
  std::vector<Vector> boundary_points() const;
  std::vector<Vector> anchors() const;
  std::vector<Vector> inputs() const;
  // Throws InvalidArgument when pairing or label invariants are broken.
  void validate() const;
};

struct AssumptionReport {
  int requested_rank = 0;
  int achieved_rank = 0;
  double max_coherence = 0.0;
  double coherence_bound = 0.0;
  double anchor_margin = 0.0;
  double anchor_leakage = 0.0;
  double leakage_bound = 0.0;  // Q * epsilon, 0 when no config was given
  double min_pivot = 0.0;      // smallest accepted Gram-Schmidt residual
  bool assumption1_ok = false;
  bool smoothness_ok = false;
  bool anchor_ok = false;
};

TeachingSet linear_teaching_set(const Vector& theta_star);

struct SearchConfig {
  double radius = 1.0;           // sampling ball radius
  double root_tol = 1e-10;       // relative to max |f| at the chord ends
  double pivot_tol = 1e-8;       // relative, on unit-normalized images
  std::size_t chord_budget = 100000;
  std::size_t pool_factor = 6;   // candidate roots gathered per wanted point
  int max_bisections = 200;
  // When false, a short-ranked search is completed with further spread-out
  // roots and the shortfall is left to the assumption report.
  bool require_full_rank = true;
};

struct BoundarySearch {
  std::vector<Vector> points;      // selected boundary points
  std::size_t independent = 0;     // how many of them passed the rank test
  std::vector<double> residuals;   // Gram-Schmidt residuals of those
  std::size_t chords = 0;
  std::size_t sign_changes = 0;
  std::size_t candidates = 0;
  double min_sampled = 0.0;        // extremes of f over the chord ends
  double max_sampled = 0.0;
  double worst_root_value = 0.0;   // max |f(z)| over returned points
};

// Samples random chords in a ball centred at the origin, bisects sign
// changes of theta . Phi and keeps a spread-out independent subset. Never
// throws on a short result; see polynomial_boundary_points.
BoundarySearch search_boundary(const PrimalModel& theta, std::size_t count,
                               std::uint64_t rng_seed, const SearchConfig& search);

std::vector<Vector> polynomial_boundary_points(const PrimalModel& theta_tilde,
                                               int d, int k, std::size_t count,
                                               std::uint64_t rng_seed,
                                               const SearchConfig& search = {});

struct PolynomialTeaching {
  TeachingSet set;
  AssumptionReport report;
};

PolynomialTeaching polynomial_teaching_set(const PrimalModel& theta_tilde, int d,
                                           int k, std::uint64_t rng_seed);

// theta . Phi(e_i) summed with weight 1/sqrt(d); has no real roots for even k.
PrimalModel counterexample_theta(int d, int k);

enum class RConvention { main, appendix };

std::string to_string(RConvention c);
RConvention r_convention_from_string(const std::string& s);

struct GaussianTeachConfig {
  double epsilon = 0.1;
  std::optional<int> s;          // overrides the order picked from epsilon
  double ball_factor = 4.0;
  double anchor_Q = 1.0;
  double margin_frac = 0.5;
  std::size_t anchor_budget = 100000;
  bool strict_anchor = false;    // enforce the leakage bound instead of reporting it
  RConvention convention = RConvention::main;
  SearchConfig search = default_gaussian_search();

  static SearchConfig default_gaussian_search();
};

struct GaussianTeaching {
  TeachingSet set;
  ApproxConfig config;
  AssumptionReport report;
  PrimalModel theta_tilde;  // unit norm, truncated feature space
};

GaussianTeaching gaussian_teaching_set(const DualModel& theta_star, double epsilon,
                                       std::uint64_t rng_seed);
GaussianTeaching gaussian_teaching_set(const DualModel& theta_star,
                                       const GaussianTeachConfig& cfg,
                                       std::uint64_t rng_seed);

struct ClosedForm {
  DualModel model;        // unit RKHS norm
  Vector eta;             // solution before normalization
  double beta0 = 0.0;     // eta' Lambda eta
  double residual_inf = 0.0;
  double condition = 0.0;
};

// Solves Lambda eta = nu over the distinct teaching points, where nu is 0 on
// boundary points and the label on anchors, then normalizes.
ClosedForm closed_form_certificate(const TeachingSet& ts, double sigma);
DualModel closed_form_dual(const TeachingSet& ts, double sigma);

AssumptionReport check_assumptions(const TeachingSet& ts,
                                   const PrimalModel& theta_tilde,
                                   const std::optional<ApproxConfig>& config = {},
                                   double pivot_tol = 1e-8);

std::string to_json(const AssumptionReport& r, int indent = 2);

}  // namespace kt
