#include "kt/datasets.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "kt/error.hpp"

namespace kt {

void Dataset::validate() const {
  if (x.size() != y.size()) throw InvalidArgument("dataset: label count mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != d) throw InvalidArgument("dataset: point dimension mismatch");
    if (y[i] != 1 && y[i] != -1) throw InvalidArgument("dataset: label not in {-1,+1}");
  }
}

std::string to_string(DatasetKind k) {
  switch (k) {
    case DatasetKind::moons: return "moons";
    case DatasetKind::circles: return "circles";
    case DatasetKind::banana: return "banana";
    case DatasetKind::blobs: return "blobs";
    case DatasetKind::linear_margin: return "linear_margin";
  }
  return "unknown";
}

DatasetKind dataset_kind_from_string(const std::string& s) {
  if (s == "moons") return DatasetKind::moons;
  if (s == "circles") return DatasetKind::circles;
  if (s == "banana") return DatasetKind::banana;
  if (s == "blobs") return DatasetKind::blobs;
  if (s == "linear_margin") return DatasetKind::linear_margin;
  throw InvalidArgument("unknown dataset kind '" + s + "'");
}

Dataset generate(DatasetKind kind, int n, double noise, std::uint64_t seed,
                 const GeneratorOptions& opts) {
  if (n < 2) throw InvalidArgument("generate: n must be >= 2");
  if (!(noise >= 0.0)) throw InvalidArgument("generate: noise must be >= 0");
  constexpr double pi = std::numbers::pi;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Dataset ds;
  ds.d = 2;
  ds.name = to_string(kind);
  ds.seed = seed;
  const int n_neg = n / 2;
  const int n_pos = n - n_neg;
  auto add = [&](double a, double b, int label) {
    Vector p(2);
    p << a, b;
    ds.x.push_back(p);
    ds.y.push_back(label);
  };

  switch (kind) {
    case DatasetKind::moons: {
      for (int i = 0; i < n_neg; ++i) {
        const double t = n_neg > 1 ? pi * i / (n_neg - 1) : 0.0;
        add(std::cos(t) - 0.5, std::sin(t) - 0.25, -1);
      }
      for (int i = 0; i < n_pos; ++i) {
        const double t = n_pos > 1 ? pi * i / (n_pos - 1) : 0.0;
        add(0.5 - std::cos(t), 0.25 - std::sin(t), 1);
      }
      break;
    }
    case DatasetKind::circles: {
      for (int i = 0; i < n_neg; ++i) {
        const double t = 2.0 * pi * i / n_neg;
        add(std::cos(t), std::sin(t), -1);
      }
      for (int i = 0; i < n_pos; ++i) {
        const double t = 2.0 * pi * i / n_pos;
        add(opts.circle_factor * std::cos(t), opts.circle_factor * std::sin(t), 1);
      }
      break;
    }
    case DatasetKind::banana: {
      for (int i = 0; i < n_neg; ++i) {
        const double t = pi * unif(rng);
        add(std::cos(t), 0.3 - std::sin(t), -1);
      }
      for (int i = 0; i < n_pos; ++i) {
        const double t = pi * unif(rng);
        add(std::cos(t), std::sin(t) - 0.3, 1);
      }
      break;
    }
    case DatasetKind::blobs: {
      for (int c = 0; c < 2; ++c) {
        const int label = c == 0 ? -1 : 1;
        const int cnt = c == 0 ? n_neg : n_pos;
        for (int i = 0; i < cnt; ++i) {
          const double r = 0.5 * std::sqrt(unif(rng));
          const double t = 2.0 * pi * unif(rng);
          add(label * 1.0 + r * std::cos(t), r * std::sin(t), label);
        }
      }
      break;
    }
    case DatasetKind::linear_margin: {
      const double phi = 2.0 * pi * unif(rng);
      const double w0 = std::cos(phi), w1 = std::sin(phi);
      int got_neg = 0, got_pos = 0;
      while (got_neg < n_neg || got_pos < n_pos) {
        const double a = 2.0 * unif(rng) - 1.0;
        const double b = 2.0 * unif(rng) - 1.0;
        const double m = w0 * a + w1 * b;
        if (std::abs(m) < opts.margin) continue;
        if (m < 0 && got_neg < n_neg) {
          add(a, b, -1);
          ++got_neg;
        } else if (m > 0 && got_pos < n_pos) {
          add(a, b, 1);
          ++got_pos;
        }
      }
      break;
    }
  }
  if (noise > 0.0)
    for (auto& p : ds.x)
      for (Eigen::Index j = 0; j < p.size(); ++j) p[j] += noise * gauss(rng);
  return ds;
}

Dataset generate(const std::string& kind, int n, double noise, std::uint64_t seed) {
  return generate(dataset_kind_from_string(kind), n, noise, seed);
}

ReferenceModel train_reference(const Dataset& data, const KernelSpec& spec,
                               const LearnerConfig& config) {
  if (data.size() == 0) throw InvalidArgument("train_reference: empty dataset");
  if (spec.family != KernelFamily::Gaussian)
    throw InvalidArgument("train_reference: needs a gaussian kernel");
  data.validate();
  auto res = fit_detailed(data.x, data.y, spec, config);
  ReferenceModel out;
  out.model = std::move(res.model);
  out.train_loss = res.loss;
  out.converged = res.loss <= config.loss_tol;
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    acc += std::max(-data.y[i] * out.model.decision_value(data.x[i]), 0.0);
  out.err_star = acc / static_cast<double>(data.size());
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_number(const std::string& cell, std::size_t line) {
  const std::string t = trim(cell);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last)
    throw ParseError("line " + std::to_string(line) + ": cannot parse '" + t + "'", line);
  return v;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Dataset parse_csv(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) {
      header = split(line);
      break;
    }
  }
  if (header.empty()) throw ParseError("empty csv", lineno);
  for (auto& h : header) h = trim(h);
  std::size_t ycol = header.size();
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == "y") ycol = i;
  if (ycol == header.size() || ycol == 0)
    throw ParseError("header must be x1,...,xd,y", 1);
  for (std::size_t i = 0; i < ycol; ++i)
    if (header[i] != "x" + std::to_string(i + 1))
      throw ParseError("header column " + std::to_string(i + 1) + " should be x" +
                           std::to_string(i + 1),
                       1);

  Dataset ds;
  ds.d = static_cast<int>(ycol);
  ds.name = name;
  std::vector<double> raw;
  std::vector<std::size_t> lines;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw ParseError("line " + std::to_string(lineno) + ": expected " +
                           std::to_string(header.size()) + " fields, got " +
                           std::to_string(cells.size()),
                       lineno);
    Vector p(ds.d);
    for (int j = 0; j < ds.d; ++j) p[j] = parse_number(cells[static_cast<std::size_t>(j)], lineno);
    ds.x.push_back(p);
    raw.push_back(parse_number(cells[ycol], lineno));
    lines.push_back(lineno);
  }
  bool zero_one = !raw.empty();
  for (double v : raw) zero_one = zero_one && (v == 0.0 || v == 1.0);
  bool has_zero = false;
  for (double v : raw) has_zero = has_zero || v == 0.0;
  zero_one = zero_one && has_zero;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double v = raw[i];
    if (zero_one) {
      ds.y.push_back(v == 0.0 ? -1 : 1);
    } else if (v == 1.0 || v == -1.0) {
      ds.y.push_back(static_cast<int>(v));
    } else {
      throw ParseError("line " + std::to_string(lines[i]) + ": label must be -1 or 1",
                       lines[i]);
    }
  }
  return ds;
}

Dataset load_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_csv(buf.str(), path);
}

std::string format_csv(const Dataset& data) {
  data.validate();
  std::string out;
  for (int j = 0; j < data.d; ++j) out += "x" + std::to_string(j + 1) + ",";
  out += "y\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (int j = 0; j < data.d; ++j) out += fmt17(data.x[i][j]) + ",";
    out += std::to_string(data.y[i]) + "\n";
  }
  return out;
}

void save_csv(const Dataset& data, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write " + path);
  f << format_csv(data);
  if (!f) throw Error("write failed for " + path);
}

}  // namespace kt
