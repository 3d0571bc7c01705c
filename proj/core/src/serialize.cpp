#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kt/error.hpp"
#include "kt/eval.hpp"
#include "kt/io.hpp"
#include "kt/model.hpp"
#include "kt/pipeline.hpp"
#include "kt/teacher.hpp"

namespace kt {

using nlohmann::json;

namespace {

constexpr int kModelVersion = 1;

json spec_json(const KernelSpec& s) {
  json j{{"family", to_string(s.family)}};
  switch (s.family) {
    case KernelFamily::Linear: break;
    case KernelFamily::Polynomial: j["degree"] = s.degree; break;
    case KernelFamily::Gaussian: j["sigma"] = s.sigma; break;
    case KernelFamily::TruncatedGaussian:
      j["sigma"] = s.sigma;
      j["truncation"] = s.truncation;
      break;
  }
  return j;
}

KernelSpec spec_from(const json& j) {
  KernelSpec s;
  s.family = family_from_string(j.at("family").get<std::string>());
  if (j.contains("degree")) s.degree = j["degree"].get<int>();
  if (j.contains("sigma")) s.sigma = j["sigma"].get<double>();
  if (j.contains("truncation")) s.truncation = j["truncation"].get<int>();
  s.validate();
  return s;
}

json vec_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector vec_from(const json& a) {
  Vector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_json(const KernelSpec& s, int indent) { return spec_json(s).dump(indent); }

std::string to_json(const DualModel& m, int indent) {
  json centers = json::array();
  for (const auto& c : m.centers) centers.push_back(vec_json(c));
  json j{{"version", kModelVersion},
         {"kernel", spec_json(m.spec)},
         {"centers", centers},
         {"coefficients", vec_json(m.coefficients)}};
  return j.dump(indent);
}

DualModel dual_model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("model json: ") + e.what());
  }
  try {
    if (j.value("version", 0) != kModelVersion)
      throw InvalidArgument("model json: unsupported version");
    DualModel m;
    m.spec = spec_from(j.at("kernel"));
    for (const auto& c : j.at("centers")) m.centers.push_back(vec_from(c));
    m.coefficients = vec_from(j.at("coefficients"));
    if (static_cast<std::size_t>(m.coefficients.size()) != m.centers.size())
      throw InvalidArgument("model json: coefficient count differs from center count");
    return m;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("model json: ") + e.what());
  }
}

std::string to_json(const AssumptionReport& r, int indent) {
  json j{{"requested_rank", r.requested_rank},
         {"achieved_rank", r.achieved_rank},
         {"max_coherence", r.max_coherence},
         {"coherence_bound", r.coherence_bound},
         {"anchor_margin", r.anchor_margin},
         {"anchor_leakage", r.anchor_leakage},
         {"leakage_bound", r.leakage_bound},
         {"min_pivot", r.min_pivot},
         {"assumption1_ok", r.assumption1_ok},
         {"smoothness_ok", r.smoothness_ok},
         {"anchor_ok", r.anchor_ok}};
  return j.dump(indent);
}

std::string to_json(const RiskReport& r, int indent) {
  json j{{"err_star", r.err_star},
         {"err_hat", r.err_hat},
         {"gap", r.gap},
         {"n_samples", r.n_samples},
         {"pointwise_sup", r.pointwise_sup},
         {"pointwise_mean", r.pointwise_mean},
         {"sign_agreement", r.sign_agreement}};
  return j.dump(indent);
}

std::string to_json(const ApproxConfig& c, int indent) {
  json j{{"d", c.d},
         {"epsilon", c.epsilon},
         {"R", c.R},
         {"s", c.s},
         {"epsilon_s", c.epsilon_s},
         {"ball_radius_factor", c.ball_radius_factor},
         {"anchor_Q", c.anchor_Q},
         {"coherence_target", c.coherence_target},
         {"truncated_dim", c.truncated_dim()}};
  return j.dump(indent);
}

std::string to_json(const SweepResult& r, int indent) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"s", row.s},
                    {"ts_size", row.ts_size},
                    {"err_star", row.err_star},
                    {"err_hat_mean", row.err_hat_mean},
                    {"err_hat_std", row.err_hat_std},
                    {"gap_mean", row.gap_mean},
                    {"trials", row.trials},
                    {"sup_mean", row.sup_mean},
                    {"fit_loss_mean", row.fit_loss_mean},
                    {"rank_mean", row.rank_mean},
                    {"requested_rank", row.requested_rank}});
  json failures = json::array();
  for (const auto& f : r.failures) failures.push_back({{"s", f.s}, {"reason", f.reason}});
  json j{{"dataset", r.dataset_name},
         {"sigma", r.sigma},
         {"seed", r.seed},
         {"r_convention", r.convention},
         {"rows", rows},
         {"failures", failures}};
  return j.dump(indent);
}

std::string format_teaching_csv(const TeachingSet& ts) {
  const int d = ts.dim();
  std::string out;
  for (int j = 0; j < d; ++j) out += "x" + std::to_string(j + 1) + ",";
  out += "y,tag\n";
  for (const auto& it : ts.items) {
    for (int j = 0; j < d; ++j) out += fmt17(it.x[j]) + ",";
    out += std::to_string(it.y) + "," + to_string(it.tag) + "\n";
  }
  return out;
}

TeachingSet parse_teaching_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty teaching set csv", 0);
  ++lineno;
  int d = 0;
  {
    std::istringstream hs(line);
    std::string h;
    while (std::getline(hs, h, ',')) {
      if (!h.empty() && h.back() == '\r') h.pop_back();
      if (h == "y") break;
      ++d;
    }
  }
  if (d < 1) throw ParseError("teaching set csv header must start with x1", 1);
  TeachingSet ts;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) != d + 2)
      throw ParseError("line " + std::to_string(lineno) + ": wrong field count", lineno);
    TeachingItem it;
    it.x.resize(d);
    try {
      for (int j = 0; j < d; ++j) {
        std::size_t used = 0;
        it.x[j] = std::stod(cells[static_cast<std::size_t>(j)], &used);
        if (used != cells[static_cast<std::size_t>(j)].size()) throw std::invalid_argument("");
      }
      it.y = std::stoi(cells[static_cast<std::size_t>(d)]);
      it.tag = tag_from_string(cells[static_cast<std::size_t>(d) + 1]);
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(lineno) + ": malformed row", lineno);
    }
    ts.items.push_back(std::move(it));
  }
  ts.validate();
  return ts;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write " + path);
  f << text;
  if (!f) throw Error("write failed for " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

}  // namespace kt
