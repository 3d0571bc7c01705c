#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kt/kernel.hpp"
#include "kt/learner.hpp"
#include "kt/model.hpp"

namespace kt {

struct Dataset {
  std::vector<Vector> x;
  std::vector<int> y;
  int d = 0;
  std::string name;
  std::uint64_t seed = 0;

  std::size_t size() const { return x.size(); }
  void validate() const;
  bool operator==(const Dataset& o) const { return x == o.x && y == o.y && d == o.d; }
};

enum class DatasetKind { moons, circles, banana, blobs, linear_margin };

std::string to_string(DatasetKind k);
DatasetKind dataset_kind_from_string(const std::string& s);

struct GeneratorOptions {
  double circle_factor = 0.5;  // inner radius of circles
  double margin = 0.2;         // linear_margin gap half-width
};

// moons: unit upper arc (label -1) and the shifted lower arc (label +1),
// recentred on the origin. circles: radii 1 (label -1) and circle_factor
// (label +1). banana: two facing crescents whose tips overlap. blobs: discs
// of radius 0.5 around (+-1, 0). linear_margin: uniform in [-1,1]^2, labelled
// by a seeded direction, with a band of half-width margin left empty.
// Every kind adds isotropic gaussian noise of the given scale.
Dataset generate(DatasetKind kind, int n, double noise, std::uint64_t seed,
                 const GeneratorOptions& opts = {});
Dataset generate(const std::string& kind, int n, double noise, std::uint64_t seed);

struct ReferenceModel {
  DualModel model;   // unit RKHS norm
  double err_star = 0.0;
  double train_loss = 0.0;
  bool converged = false;
};

ReferenceModel train_reference(const Dataset& data, const KernelSpec& spec,
                               const LearnerConfig& config);

Dataset load_csv(const std::string& path);
void save_csv(const Dataset& data, const std::string& path);
Dataset parse_csv(const std::string& text, const std::string& name = "csv");
std::string format_csv(const Dataset& data);

}  // namespace kt
