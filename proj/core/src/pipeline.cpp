#include "kt/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

namespace kt {

std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(root);
  for (auto p : path) h = mix(h ^ mix(p + 0x632be59bd9b4e019ULL));
  return h;
}

PipelineResult run_gaussian_pipeline(const Dataset& data, const PipelineConfig& cfg,
                                     std::uint64_t seed) {
  ReferenceModel ref;
  try {
    LearnerConfig lc = cfg.reference;
    lc.seed = derive_seed(seed, {1});
    ref = train_reference(data, KernelSpec::gaussian(cfg.sigma), lc);
  } catch (const std::exception& e) {
    throw Error(std::string("reference: ") + e.what());
  }
  return run_gaussian_pipeline(data, ref, cfg, seed);
}

PipelineResult run_gaussian_pipeline(const Dataset& data, const ReferenceModel& ref,
                                     const PipelineConfig& cfg, std::uint64_t seed) {
  PipelineResult out;
  out.reference = ref;
  try {
    out.teaching = gaussian_teaching_set(ref.model, cfg.teach, derive_seed(seed, {2}));
  } catch (const std::exception& e) {
    throw Error(std::string("teacher: ") + e.what());
  }
  try {
    out.certificate = closed_form_certificate(out.teaching.set, cfg.sigma);
    out.certificate_loss = training_loss(out.certificate->model, out.teaching.set);
  } catch (const std::exception& e) {
    out.certificate_error = e.what();
  }
  try {
    LearnerConfig lc = cfg.learner;
    lc.seed = derive_seed(seed, {3});
    out.fit = fit_detailed(out.teaching.set, KernelSpec::gaussian(cfg.sigma), lc);
    out.fit_converged = out.fit.loss <= lc.loss_tol;
  } catch (const std::exception& e) {
    throw Error(std::string("learner: ") + e.what());
  }
  out.risk = risk_gap(ref.model, out.fit.model, data);
  out.probe_radius = out.teaching.config.input_radius(cfg.sigma);
  const auto probes =
      ball_probes(data.d, out.probe_radius, cfg.probes, derive_seed(seed, {4}));
  out.probe_sup = pointwise_gap(ref.model, out.fit.model, probes);
  return out;
}

namespace {

struct Trial {
  bool ok = false;
  std::string reason;
  std::size_t ts_size = 0;
  int requested = 0;
  int achieved = 0;
  std::vector<double> err_hat, gap, sup, loss;
};

Trial run_trial(const Dataset& data, const ReferenceModel& ref, const SweepConfig& cfg,
                int s, int trial) {
  Trial t;
  try {
    GaussianTeachConfig tc;
    tc.s = s;
    tc.convention = cfg.convention;
    tc.ball_factor = cfg.ball_factor;
    tc.anchor_Q = cfg.anchor_Q;
    const auto teach = gaussian_teaching_set(
        ref.model, tc, derive_seed(cfg.seed, {static_cast<std::uint64_t>(s),
                                              static_cast<std::uint64_t>(trial), 0}));
    t.ts_size = teach.set.size();
    t.requested = teach.report.requested_rank;
    t.achieved = teach.report.achieved_rank;
    const KernelSpec spec = KernelSpec::gaussian(cfg.sigma);
    for (int r = 0; r < cfg.restarts; ++r) {
      LearnerConfig lc = cfg.learner;
      lc.seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(s),
                                       static_cast<std::uint64_t>(trial),
                                       static_cast<std::uint64_t>(r) + 1});
      const auto fit = fit_detailed(teach.set, spec, lc);
      const auto rep = risk_gap(ref.model, fit.model, data);
      t.err_hat.push_back(rep.err_hat);
      t.gap.push_back(rep.gap);
      t.sup.push_back(rep.pointwise_sup);
      t.loss.push_back(fit.loss);
    }
    t.ok = true;
  } catch (const std::exception& e) {
    t.reason = e.what();
  }
  return t;
}

double mean(const std::vector<double>& v) {
  double a = 0.0;
  for (double x : v) a += x;
  return v.empty() ? 0.0 : a / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double a = 0.0;
  for (double x : v) a += (x - m) * (x - m);
  return std::sqrt(a / static_cast<double>(v.size() - 1));
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SweepResult run_sweep(const Dataset& data, const ReferenceModel& ref,
                      const SweepConfig& cfg, const SweepProgress& progress) {
  if (cfg.s_min > cfg.s_max) throw InvalidArgument("sweep: s_min > s_max");
  if (cfg.s_min < 0) throw InvalidArgument("sweep: s_min < 0");
  if (cfg.rebuilds < 1 || cfg.restarts < 1) throw InvalidArgument("sweep: trials must be >= 1");

  const int ns = cfg.s_max - cfg.s_min + 1;
  const int jobs = ns * cfg.rebuilds;
  std::vector<Trial> trials(static_cast<std::size_t>(jobs));
  std::atomic<int> next{0};
  std::mutex mu;
  unsigned nthreads = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
  nthreads = std::max(1u, std::min<unsigned>(nthreads, static_cast<unsigned>(jobs)));

  // larger s first so the long jobs start early
  auto worker = [&] {
    for (int j = next++; j < jobs; j = next++) {
      const int s = cfg.s_max - j / cfg.rebuilds;
      const int trial = j % cfg.rebuilds;
      trials[static_cast<std::size_t>(j)] = run_trial(data, ref, cfg, s, trial);
      if (progress) {
        std::lock_guard<std::mutex> lock(mu);
        const auto& t = trials[static_cast<std::size_t>(j)];
        progress(s, "trial " + std::to_string(trial) + (t.ok ? " done" : " failed: " + t.reason));
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  SweepResult res;
  res.dataset_name = data.name;
  res.sigma = cfg.sigma;
  res.seed = cfg.seed;
  res.convention = to_string(cfg.convention);
  for (int s = cfg.s_min; s <= cfg.s_max; ++s) {
    SweepRow row;
    row.s = s;
    row.err_star = ref.err_star;
    std::vector<double> err_hat, gap, sup, loss;
    double rank = 0.0;
    int built = 0;
    std::string reason;
    for (int trial = 0; trial < cfg.rebuilds; ++trial) {
      const int j = (cfg.s_max - s) * cfg.rebuilds + trial;
      const auto& t = trials[static_cast<std::size_t>(j)];
      if (!t.ok) {
        if (reason.empty()) reason = t.reason;
        continue;
      }
      ++built;
      row.ts_size = t.ts_size;
      row.requested_rank = t.requested;
      rank += t.achieved;
      err_hat.insert(err_hat.end(), t.err_hat.begin(), t.err_hat.end());
      gap.insert(gap.end(), t.gap.begin(), t.gap.end());
      sup.insert(sup.end(), t.sup.begin(), t.sup.end());
      loss.insert(loss.end(), t.loss.begin(), t.loss.end());
    }
    if (built < cfg.rebuilds) {
      res.failures.push_back({s, reason});
      continue;
    }
    row.trials = static_cast<int>(err_hat.size());
    row.err_hat_mean = mean(err_hat);
    row.err_hat_std = stddev(err_hat);
    row.gap_mean = mean(gap);
    row.sup_mean = mean(sup);
    row.fit_loss_mean = mean(loss);
    row.rank_mean = rank / built;
    res.rows.push_back(row);
  }
  return res;
}

std::string sweep_csv(const SweepResult& r) {
  std::string out = "s,ts_size,err_star,err_hat_mean,err_hat_std,gap_mean\n";
  for (const auto& row : r.rows) {
    out += std::to_string(row.s) + "," + std::to_string(row.ts_size) + "," +
           fmt17(row.err_star) + "," + fmt17(row.err_hat_mean) + "," +
           fmt17(row.err_hat_std) + "," + fmt17(row.gap_mean) + "\n";
  }
  return out;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw InvalidArgument("fit_slope: need two or more paired values");
  const double mx = mean(xs), my = mean(ys);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw InvalidArgument("fit_slope: constant abscissa");
  return sxy / sxx;
}

}  // namespace kt
