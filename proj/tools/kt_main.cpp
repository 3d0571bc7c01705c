#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "kt/kt.hpp"

namespace fs = std::filesystem;
using namespace kt;

namespace {

enum Exit { ok = 0, acceptance = 1, usage = 2, pipeline = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void setup_logging() {
  auto log = spdlog::stderr_color_mt("kt");
  spdlog::set_default_logger(log);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("KT_LOG")) {
    const auto lvl = spdlog::level::from_str(env);
    // from_str maps unknown names to off; keep the default instead
    if (lvl != spdlog::level::off || std::string(env) == "off") spdlog::set_level(lvl);
  }
}

Vector parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw UsageError("cannot parse vector component '" + cell + "'");
    }
  }
  if (vals.empty()) throw UsageError("empty vector");
  return Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

std::string fmt_vec(const Vector& v) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.4f", i ? ", " : "", v[i]);
    out += buf;
  }
  return out + ")";
}

void print_set(const TeachingSet& ts) {
  for (const auto& it : ts.items)
    std::printf("  %-13s y=%+d  x=%s\n", to_string(it.tag).c_str(), it.y, fmt_vec(it.x).c_str());
}

// demo-linear

struct LinearArgs {
  std::string theta;
  int dim = 0;
  std::uint64_t seed = 0;
};

int demo_linear(const LinearArgs& a) {
  Vector theta;
  if (!a.theta.empty()) {
    theta = parse_vector(a.theta);
  } else if (a.dim > 0) {
    std::mt19937_64 rng(a.seed);
    std::normal_distribution<double> g(0, 1);
    theta.resize(a.dim);
    for (int i = 0; i < a.dim; ++i) theta[i] = g(rng);
  } else {
    theta = Vector(3);
    theta << -3, 3, 5;
  }
  if (theta.size() < 2) throw UsageError("theta needs at least two components");
  if (theta.norm() == 0.0) throw UsageError("theta must be nonzero");

  const auto ts = linear_teaching_set(theta);
  std::printf("theta* = %s\nteaching set (%zu points):\n", fmt_vec(theta).c_str(), ts.size());
  print_set(ts);
  LearnerConfig cfg;
  cfg.seed = a.seed;
  cfg.loss_tol = 1e-9;
  const auto res = fit_detailed(ts, KernelSpec::linear(), cfg);
  const double cosv =
      direction_similarity(res.model, make_primal(KernelSpec::linear(), static_cast<int>(theta.size()), theta));
  std::printf("learned direction = %s\ncosine = %.12f\ntraining loss = %.3e\n",
              fmt_vec(res.model.coefficients).c_str(), cosv, res.loss);
  return cosv >= 1 - 1e-6 ? Exit::ok : Exit::acceptance;
}

// demo-poly

struct PolyArgs {
  std::string theta = "1,4,4";
  int d = 2;
  int k = 2;
  std::uint64_t seed = 0;
};

int demo_poly(const PolyArgs& a) {
  if (a.d < 1 || a.k < 1) throw UsageError("--d and --k must be positive");
  const auto spec = KernelSpec::polynomial(a.k);
  PrimalModel theta;
  if (a.theta == "counterexample") {
    if (a.k % 2) throw UsageError("the counterexample needs an even degree");
    theta = counterexample_theta(a.d, a.k);
  } else {
    const Vector t = parse_vector(a.theta);
    const auto want = feature_dim(spec, a.d);
    if (t.size() != want)
      throw UsageError("theta needs " + std::to_string(want) + " feature coordinates");
    if (t.norm() == 0.0) throw UsageError("theta must be nonzero");
    theta = make_primal(spec, a.d, t);
  }
  std::printf("theta~ = %s\n", fmt_vec(theta.theta.coords).c_str());
  PolynomialTeaching pt;
  try {
    pt = polynomial_teaching_set(theta, a.d, a.k, a.seed);
  } catch (const SamplerExhausted& e) {
    std::printf("assumption 1 fails: the boundary sampler found %zu of %zu independent roots\n  %s\n",
                e.achieved(), e.requested(), e.what());
    return Exit::pipeline;
  }
  std::printf("teaching set (%zu points, r = %d):\n", pt.set.size(), pt.report.requested_rank + 1);
  print_set(pt.set);
  LearnerConfig cfg;
  cfg.seed = a.seed;
  cfg.loss_tol = 1e-12;
  const auto res = fit_detailed(pt.set, spec, cfg);
  const double cosv = direction_similarity(res.model, theta);
  double agree = 1.0;
  if (a.d == 2) agree = sign_agreement(theta, res.model, grid_probes(1.0, 100), 1e-6);
  std::printf("feature-space cosine = %.10f\ntraining loss = %.3e\n", cosv, res.loss);
  if (a.d == 2) std::printf("sign agreement (100x100 grid) = %.4f\n", agree);
  return cosv >= 1 - 1e-4 && agree == 1.0 ? Exit::ok : Exit::acceptance;
}

// shared dataset options

struct DataArgs {
  std::string dataset;
  std::string kind;
  int n = 200;
  double noise = -1.0;
  std::uint64_t data_seed = 7;

  Dataset load() const {
    if (!dataset.empty() && !kind.empty()) throw UsageError("give --dataset or --kind, not both");
    if (!dataset.empty()) {
      if (!fs::exists(dataset)) throw UsageError("dataset file not found: " + dataset);
      return load_csv(dataset);
    }
    if (kind.empty()) throw UsageError("one of --dataset or --kind is required");
    DatasetKind k;
    try {
      k = dataset_kind_from_string(kind);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    const double nz = noise >= 0 ? noise : (k == DatasetKind::circles ? 0.05 : 0.1);
    return generate(k, n, nz, data_seed);
  }
};

void add_data_options(CLI::App* cmd, DataArgs& d) {
  cmd->add_option("--dataset", d.dataset, "CSV file with columns x1..xd,y");
  cmd->add_option("--kind", d.kind, "generator: moons, circles, banana, blobs, linear_margin");
  cmd->add_option("--n", d.n, "generated sample count")->check(CLI::PositiveNumber);
  cmd->add_option("--noise", d.noise, "generator noise (default 0.05 circles, 0.1 otherwise)");
  cmd->add_option("--data-seed", d.data_seed, "generator seed");
}

RConvention parse_convention(const std::string& s) {
  try {
    return r_convention_from_string(s);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

fs::path prepare_out(const std::string& out) {
  if (out.empty()) throw UsageError("--out is required");
  fs::create_directories(out);
  return fs::path(out);
}

// teach-gaussian

struct TeachArgs {
  DataArgs data;
  double sigma = 0.9;
  std::optional<double> epsilon;
  std::optional<int> s;
  std::uint64_t seed = 0;
  std::string out;
  std::string convention = "main";
  double ball_factor = 4.0;
  double anchor_q = 1.0;
};

int teach_gaussian(const TeachArgs& a) {
  if (a.epsilon && a.s) throw UsageError("give --epsilon or --s, not both");
  if (a.epsilon && !(*a.epsilon > 0 && *a.epsilon < 1)) throw UsageError("--epsilon must lie in (0, 1)");
  if (a.s && *a.s < 0) throw UsageError("--s must be >= 0");
  if (!(a.sigma > 0)) throw UsageError("--sigma must be positive");
  const Dataset data = a.data.load();
  const fs::path dir = prepare_out(a.out);

  PipelineConfig cfg;
  cfg.sigma = a.sigma;
  cfg.teach.epsilon = a.epsilon.value_or(cfg.teach.epsilon);
  cfg.teach.s = a.s;
  cfg.teach.convention = parse_convention(a.convention);
  cfg.teach.ball_factor = a.ball_factor;
  cfg.teach.anchor_Q = a.anchor_q;
  spdlog::info("dataset {} with {} points", data.name, data.size());
  const auto res = run_gaussian_pipeline(data, cfg, a.seed);
  const auto& tc = res.teaching.config;
  std::printf("s = %d (R = %.4f, epsilon = %.4g%s)\n", tc.s, tc.R, tc.epsilon,
              a.s ? ", order given" : ", order chosen from epsilon");
  std::printf("teaching set: %zu points, boundary rank %d/%d\n", res.teaching.set.size(),
              res.teaching.report.achieved_rank, res.teaching.report.requested_rank);
  std::printf("reference risk %.6g, learned risk %.6g, gap %.3e, probe sup %.3e\n",
              res.risk.err_star, res.risk.err_hat, res.risk.gap, res.probe_sup);
  if (!res.fit_converged) spdlog::warn("learner stopped at loss {:.3e}", res.fit.loss);

  write_text((dir / "teaching_set.csv").string(), format_teaching_csv(res.teaching.set));
  write_text((dir / "reference_model.json").string(), to_json(res.reference.model));
  write_text((dir / "fitted_model.json").string(), to_json(res.fit.model));
  write_text((dir / "risk.json").string(), to_json(res.risk));
  write_text((dir / "assumptions.json").string(), to_json(res.teaching.report));
  write_text((dir / "config.json").string(), to_json(tc));
  if (res.certificate) {
    write_text((dir / "certificate_model.json").string(), to_json(res.certificate->model));
    std::printf("closed-form certificate loss %.3e\n", res.certificate_loss);
  } else {
    std::printf("closed-form certificate unavailable: %s\n", res.certificate_error.c_str());
  }
  std::printf("wrote %s\n", dir.string().c_str());
  return Exit::ok;
}

// sweep

struct SweepArgs {
  DataArgs data;
  double sigma = 0.9;
  int s_min = 2;
  int s_max = 12;
  int trials = 5;
  int restarts = 5;
  std::uint64_t seed = 0;
  std::string out;
  std::string convention = "main";
  double ball_factor = 4.0;
  double anchor_q = 1.0;
  unsigned threads = 0;
};

int sweep(const SweepArgs& a) {
  if (a.s_min > a.s_max) throw UsageError("--s-min must not exceed --s-max");
  if (a.s_min < 0) throw UsageError("--s-min must be >= 0");
  if (a.trials < 1 || a.restarts < 1) throw UsageError("--trials and --restarts must be >= 1");
  const Dataset data = a.data.load();
  const fs::path dir = prepare_out(a.out);
  ReferenceModel ref;
  try {
    LearnerConfig lc;
    lc.seed = derive_seed(a.seed, {1});
    ref = train_reference(data, KernelSpec::gaussian(a.sigma), lc);
  } catch (const std::exception& e) {
    throw Error(std::string("reference: ") + e.what());
  }
  SweepConfig cfg;
  cfg.sigma = a.sigma;
  cfg.s_min = a.s_min;
  cfg.s_max = a.s_max;
  cfg.rebuilds = a.trials;
  cfg.restarts = a.restarts;
  cfg.seed = a.seed;
  cfg.convention = parse_convention(a.convention);
  cfg.ball_factor = a.ball_factor;
  cfg.anchor_Q = a.anchor_q;
  cfg.threads = a.threads;
  const auto res = run_sweep(data, ref, cfg, [](int s, const std::string& status) {
    spdlog::debug("s={} {}", s, status);
  });
  std::printf("%4s %8s %14s %14s\n", "s", "size", "gap_mean", "err_hat_mean");
  for (const auto& row : res.rows)
    std::printf("%4d %8zu %14.6e %14.6e\n", row.s, row.ts_size, row.gap_mean, row.err_hat_mean);
  for (const auto& f : res.failures) std::printf("s=%d failed: %s\n", f.s, f.reason.c_str());
  write_text((dir / "sweep.csv").string(), sweep_csv(res));
  write_text((dir / "sweep.json").string(), to_json(res));
  std::printf("wrote %s\n", dir.string().c_str());
  return Exit::ok;
}

// eval

struct EvalArgs {
  DataArgs data;
  std::string model;
  std::string reference;
};

int eval(const EvalArgs& a) {
  if (a.model.empty()) throw UsageError("--model is required");
  const Dataset data = a.data.load();
  const auto model = dual_model_from_json(read_text(a.model));
  if (model.input_dim() != data.d) throw UsageError("model and dataset dimensions differ");
  RiskReport rep;
  if (!a.reference.empty()) {
    rep = risk_gap(dual_model_from_json(read_text(a.reference)), model, data);
  } else {
    rep = risk_gap(model, model, data);
    rep.err_star = 0.0;
    rep.gap = 0.0;
  }
  std::printf("%s\n", to_json(rep).c_str());
  return Exit::ok;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"kernel perceptron teaching sets"};
  app.require_subcommand(1);

  LinearArgs lin;
  auto* c_lin = app.add_subcommand("demo-linear", "teach a linear perceptron");
  c_lin->add_option("--theta", lin.theta, "comma separated target, default -3,3,5");
  c_lin->add_option("--dim", lin.dim, "random target of this dimension")->check(CLI::Range(2, 1000));
  c_lin->add_option("--seed", lin.seed);

  PolyArgs poly;
  auto* c_poly = app.add_subcommand("demo-poly", "teach a homogeneous polynomial perceptron");
  c_poly->add_option("--theta", poly.theta, "feature-space target or 'counterexample'");
  c_poly->add_option("--d", poly.d, "input dimension");
  c_poly->add_option("--k", poly.k, "degree");
  c_poly->add_option("--seed", poly.seed);

  TeachArgs teach;
  auto* c_teach = app.add_subcommand("teach-gaussian", "build and check a gaussian teaching set");
  add_data_options(c_teach, teach.data);
  c_teach->add_option("--sigma", teach.sigma);
  c_teach->add_option("--epsilon", teach.epsilon);
  c_teach->add_option("--s", teach.s, "truncation order");
  c_teach->add_option("--seed", teach.seed);
  c_teach->add_option("--out", teach.out, "output directory")->required();
  c_teach->add_option("--r-convention", teach.convention, "main or appendix");
  c_teach->add_option("--ball-factor", teach.ball_factor);
  c_teach->add_option("--anchor-q", teach.anchor_q);

  SweepArgs sw;
  auto* c_sweep = app.add_subcommand("sweep", "risk gap against truncation order");
  add_data_options(c_sweep, sw.data);
  c_sweep->add_option("--sigma", sw.sigma);
  c_sweep->add_option("--s-min", sw.s_min);
  c_sweep->add_option("--s-max", sw.s_max);
  c_sweep->add_option("--trials", sw.trials, "teaching sets per order");
  c_sweep->add_option("--restarts", sw.restarts, "learner restarts per teaching set");
  c_sweep->add_option("--seed", sw.seed);
  c_sweep->add_option("--out", sw.out, "output directory")->required();
  c_sweep->add_option("--r-convention", sw.convention, "main or appendix");
  c_sweep->add_option("--ball-factor", sw.ball_factor);
  c_sweep->add_option("--anchor-q", sw.anchor_q);
  c_sweep->add_option("--threads", sw.threads);

  EvalArgs ev;
  auto* c_eval = app.add_subcommand("eval", "perceptron risk of a saved model");
  add_data_options(c_eval, ev.data);
  c_eval->add_option("--model", ev.model, "model json")->required();
  c_eval->add_option("--reference", ev.reference, "reference model json for the gap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Exit::ok : Exit::usage;
  }

  try {
    if (*c_lin) return demo_linear(lin);
    if (*c_poly) return demo_poly(poly);
    if (*c_teach) return teach_gaussian(teach);
    if (*c_sweep) return sweep(sw);
    if (*c_eval) return eval(ev);
  } catch (const UsageError& e) {
    spdlog::error("{}", e.what());
    return Exit::usage;
  } catch (const ParseError& e) {
    spdlog::error("{}", e.what());
    return Exit::usage;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return Exit::pipeline;
  }
  return Exit::usage;
}
