#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rkm/attack.hpp"
#include "rkm/bounds.hpp"
#include "rkm/csv.hpp"
#include "rkm/kernels.hpp"
#include "rkm/krr.hpp"
#include "rkm/parallel.hpp"
#include "rkm/prng.hpp"
#include "rkm/sampling.hpp"
#include "rkm/spectral.hpp"

namespace rkm {

struct GridPoint {
  std::size_t n = 0;
  std::size_t d = 0;
};

// One sweep description. The distribution's dimension is overridden by each
// grid point's d; for kernel-rule sweeps (figure2 and friends) the kernel's
// a is recomputed per point.
struct ExperimentPlan {
  std::vector<GridPoint> grid;
  int runs_per_point = 20;
  KernelSpec kernel = KernelSpec::polynomial(1.0, 1.0, 4);
  DistributionSpec dist = DistributionSpec::standard_normal(100);
  std::uint64_t base_seed = 1;
  BoundConfig bounds;
  std::size_t memory_ceiling_bytes = 2ull << 30;
  unsigned threads = 0;  // 0 -> hardware concurrency

  void validate() const {
    if (grid.empty()) throw std::invalid_argument("plan: empty grid");
    if (runs_per_point < 1) throw std::invalid_argument("plan: runs_per_point must be >= 1");
    for (const auto& g : grid)
      if (g.n < 1 || g.d < 1) throw std::invalid_argument("plan: grid entries must be >= 1");
    bounds.validate();
  }
};

struct ExperimentRecord {
  std::size_t n = 0;
  std::size_t d = 0;
  int run = 0;
  std::uint64_t seed = 0;
  double measured_norm = 0.0;
  double predicted_bound = 0.0;
  std::string regime;
  double wall_time_s = 0.0;
};

// Seed for one run; a pure function of (base, n, d, run) so partial grids
// reproduce the runs of the full grid.
inline std::uint64_t run_seed(std::uint64_t base, std::size_t n, std::size_t d, int run) {
  std::uint64_t s = mix64(base + Rng::golden);
  s = mix64(s ^ mix64(static_cast<std::uint64_t>(n) + 1));
  s = mix64(s ^ mix64(static_cast<std::uint64_t>(d) + 2));
  s = mix64(s ^ mix64(static_cast<std::uint64_t>(run) + 3));
  return s;
}

namespace detail {

struct PointRule {
  KernelSpec kernel;
  double predicted = 0.0;
  std::string regime;
};

// Shared sweep driver: for every grid point and run, draw a fresh sample
// set, build the kernel matrix, and measure its spectral norm. Points whose
// matrix would blow the memory ceiling are skipped with a warning so long
// sweeps survive an oversized grid entry.
inline std::vector<ExperimentRecord> run_norm_sweep(
    const ExperimentPlan& plan,
    const std::function<PointRule(std::size_t n, std::size_t d)>& rule) {
  plan.validate();
  struct Job {
    GridPoint point;
    int run;
    PointRule rule;
  };
  std::vector<Job> jobs;
  for (const auto& point : plan.grid) {
    const std::size_t bytes = point.n * point.n * sizeof(double);
    if (bytes > plan.memory_ceiling_bytes) {
      std::cerr << "warning: skipping grid point n=" << point.n << " d=" << point.d
                << " (kernel matrix " << bytes << " B over ceiling "
                << plan.memory_ceiling_bytes << " B)\n";
      continue;
    }
    const PointRule pr = rule(point.n, point.d);
    for (int run = 0; run < plan.runs_per_point; ++run) jobs.push_back({point, run, pr});
  }
  std::vector<ExperimentRecord> records(jobs.size());
  parallel_for(jobs.size(), plan.threads, [&](std::size_t idx) {
    const Job& job = jobs[idx];
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t seed = run_seed(plan.base_seed, job.point.n, job.point.d, job.run);
    const SampleSet samples =
        sample(plan.dist.with_dimension(job.point.d), job.point.n, seed);
    const KernelMatrix k = build_kernel_matrix(samples, job.rule.kernel);
    const SpectralResult sr = spectral_norm(k);
    const auto t1 = std::chrono::steady_clock::now();
    records[idx] = ExperimentRecord{
        job.point.n,
        job.point.d,
        job.run,
        seed,
        sr.spectral_norm,
        job.rule.predicted,
        job.rule.regime,
        std::chrono::duration<double>(t1 - t0).count()};
  });
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.n, a.d, a.run) < std::tie(b.n, b.d, b.run);
  });
  return records;
}

}  // namespace detail

// Polynomial-kernel norm sweep against the calibrated envelope.
inline std::vector<ExperimentRecord> run_figure1(const ExperimentPlan& plan) {
  if (plan.kernel.family != KernelFamily::polynomial)
    throw std::invalid_argument("run_figure1: polynomial kernel required");
  const KernelSpec ks = plan.kernel;
  return detail::run_norm_sweep(plan, [&](std::size_t n, std::size_t d) {
    return detail::PointRule{
        ks, poly_bound(plan.bounds, ks.a, ks.b, ks.degree, d, n), "poly"};
  });
}

// Gaussian kernel at the per-point threshold a = (2 + delta) ln(n) / d.
inline std::vector<ExperimentRecord> run_figure2(const ExperimentPlan& plan) {
  return detail::run_norm_sweep(plan, [&](std::size_t n, std::size_t d) {
    const KernelSpec ks = KernelSpec::gaussian(gaussian_upper_threshold(d, n, plan.bounds.delta));
    return detail::PointRule{ks, 2.0, regime_name(regime_classify(ks, d, n, plan.bounds))};
  });
}

// Gaussian kernel with a = a_coeff / d; the norm stays proportional to n.
inline std::vector<ExperimentRecord> run_lower_regime(const ExperimentPlan& plan,
                                                      double a_coeff = 0.1) {
  if (!(a_coeff > 0.0)) throw std::invalid_argument("run_lower_regime: a_coeff must be > 0");
  return detail::run_norm_sweep(plan, [&](std::size_t n, std::size_t d) {
    const KernelSpec ks = KernelSpec::gaussian(a_coeff / static_cast<double>(d));
    return detail::PointRule{ks, plan.bounds.c0_lower * static_cast<double>(n),
                             regime_name(regime_classify(ks, d, n, plan.bounds))};
  });
}

// Gaussian kernel far above the threshold (a = a_log_coeff ln(n) / d). With
// the zero-or-sphere mixture the measured norm grows linearly in n, breaking
// the constant predicted bound that holds for independent coordinates.
inline std::vector<ExperimentRecord> run_mixture_counterexample(const ExperimentPlan& plan,
                                                                double a_log_coeff = 10.0) {
  if (!(a_log_coeff > 0.0))
    throw std::invalid_argument("run_mixture_counterexample: a_log_coeff must be > 0");
  return detail::run_norm_sweep(plan, [&](std::size_t n, std::size_t d) {
    if (n < 2)
      throw std::invalid_argument("run_mixture_counterexample: grid needs n >= 2");
    const KernelSpec ks =
        KernelSpec::gaussian(a_log_coeff * std::log(static_cast<double>(n)) /
                             static_cast<double>(d));
    return detail::PointRule{ks, 2.0, regime_name(regime_classify(ks, d, n, plan.bounds))};
  });
}

struct GridPointSummary {
  std::size_t n = 0;
  std::size_t d = 0;
  int runs = 0;
  double mean_norm = 0.0;
  double max_norm = 0.0;
  double min_norm = 0.0;
};

// Mean/max/min measured norm per grid point, in grid order.
inline std::vector<GridPointSummary> summarize_records(
    std::span<const ExperimentRecord> records) {
  std::vector<GridPointSummary> out;
  for (const auto& rec : records) {
    if (out.empty() || out.back().n != rec.n || out.back().d != rec.d) {
      out.push_back({rec.n, rec.d, 0, 0.0, rec.measured_norm, rec.measured_norm});
    }
    GridPointSummary& s = out.back();
    ++s.runs;
    s.mean_norm += (rec.measured_norm - s.mean_norm) / s.runs;
    s.max_norm = std::max(s.max_norm, rec.measured_norm);
    s.min_norm = std::min(s.min_norm, rec.measured_norm);
  }
  return out;
}

// Smallest C0 whose polynomial bound dominates every record, then +10%.
inline double calibrate_C0_from_records(std::span<const ExperimentRecord> records, double a,
                                        double b, int p) {
  if (records.empty()) throw std::runtime_error("calibrate_C0: no records to calibrate from");
  if (!(std::abs(a) > 0.0))
    throw std::invalid_argument("calibrate_C0: a must be nonzero");
  double c0_min = 0.0;
  for (const auto& rec : records) {
    const double n = static_cast<double>(rec.n);
    const double d = static_cast<double>(rec.d);
    const double b_term = pow_int(2.0, p + 1) * pow_int(std::abs(b), p) * n;
    const double excess = rec.measured_norm - b_term;
    if (excess <= 0.0) continue;
    c0_min = std::max(c0_min, std::pow(excess / n, 1.0 / p) / (std::abs(a) * d));
  }
  return 1.1 * c0_min;
}

// Runs its own polynomial sweep over (p, n) and calibrates C0 against it.
inline double calibrate_C0(const DistributionSpec& dist, std::size_t d,
                           std::span<const int> p_range, std::span<const std::size_t> n_range,
                           int runs, double a = 1.0, double b = 0.0,
                           std::uint64_t seed = 1,
                           std::size_t memory_ceiling_bytes = 2ull << 30,
                           unsigned threads = 0) {
  if (p_range.empty() || n_range.empty())
    throw std::invalid_argument("calibrate_C0: empty p or n range");
  double c0 = 0.0;
  bool have_data = false;
  for (int p : p_range) {
    ExperimentPlan plan;
    plan.grid.clear();
    for (std::size_t n : n_range) plan.grid.push_back({n, d});
    plan.runs_per_point = runs;
    plan.kernel = KernelSpec::polynomial(a, b, p);
    plan.dist = dist;
    plan.base_seed = mix64(seed + static_cast<std::uint64_t>(p));
    plan.memory_ceiling_bytes = memory_ceiling_bytes;
    plan.threads = threads;
    const auto records = run_figure1(plan);
    if (records.empty()) continue;
    have_data = true;
    c0 = std::max(c0, calibrate_C0_from_records(records, a, b, p));
  }
  if (!have_data)
    throw std::runtime_error("calibrate_C0: every grid point was skipped; no data");
  return c0;
}

// ---------------------------------------------------------------------------
// privacy sweep

struct AttackTrialRecord {
  std::uint64_t seed = 0;
  double beta = 0.0;  // for gaussian/laplace noise: observed ||e||_inf
  std::size_t n = 0;
  std::string y_kind;  // "random" | "zeros" | "ones"
  std::size_t hamming = 0;
  double recovered_fraction = 0.0;
  double lemma_bound = 0.0;  // clamped to n when vacuous
  double spectral_norm = 0.0;
};

struct PrivacySummaryRow {
  double beta = 0.0;
  double median_hamming = 0.0;
  double lemma_bound = 0.0;  // median of per-trial clamped bounds
};

struct PrivacySweepResult {
  std::vector<AttackTrialRecord> trials;
  std::vector<PrivacySummaryRow> summary;
};

namespace detail {

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace detail

// Full pipeline for one trial: draw X, build K, fit, perturb the
// coefficients, decode, score against the truth.
inline AttackTrialRecord run_attack_trial(const DistributionSpec& dist,
                                          const KernelSpec& kernel, std::size_t n,
                                          double lambda, NoiseFamily noise_family,
                                          double magnitude, std::uint64_t seed,
                                          const std::string& y_kind) {
  const SampleSet samples = sample(dist, n, seed);
  const KernelMatrix k = build_kernel_matrix(samples, kernel);

  Rng rng(mix64(seed ^ 0x79a7ull));
  std::vector<int> y(n);
  if (y_kind == "zeros") {
    std::fill(y.begin(), y.end(), 0);
  } else if (y_kind == "ones") {
    std::fill(y.begin(), y.end(), 1);
  } else {
    for (int& v : y) v = rng.next_bool() ? 1 : 0;
  }
  std::vector<double> y_real(y.begin(), y.end());

  const RidgeModel model = fit(k, y_real, lambda);
  NoiseSpec noise;
  const std::uint64_t noise_seed = mix64(seed ^ 0xe0157ull);
  switch (noise_family) {
    case NoiseFamily::uniform_inf: noise = NoiseSpec::uniform_inf(magnitude, noise_seed); break;
    case NoiseFamily::gaussian_iid: noise = NoiseSpec::gaussian_iid(magnitude, noise_seed); break;
    case NoiseFamily::laplace_iid: noise = NoiseSpec::laplace_iid(magnitude, noise_seed); break;
    case NoiseFamily::explicit_vector:
      throw std::invalid_argument("run_attack_trial: explicit noise is not a trial family");
  }
  const std::vector<double> e = draw_noise(noise, n);
  std::vector<double> alpha_tilde = model.alpha;
  axpy(1.0, e, alpha_tilde);

  const std::vector<int> y_hat = reconstruct(k, lambda, alpha_tilde);
  const SpectralResult sr = spectral_norm(k);
  // the bound needs a sup-norm radius; for unbounded families use the
  // realized one
  const double beta_eff =
      noise_family == NoiseFamily::uniform_inf ? magnitude : norm_inf(e);
  const AttackOutcome outcome = score(y, y_hat, sr.spectral_norm, lambda, beta_eff);

  AttackTrialRecord rec;
  rec.seed = seed;
  rec.beta = beta_eff;
  rec.n = n;
  rec.y_kind = y_kind;
  rec.hamming = outcome.hamming;
  rec.recovered_fraction = outcome.recovered_fraction;
  rec.lemma_bound = std::min(static_cast<double>(n), *outcome.lemma_bound);
  rec.spectral_norm = sr.spectral_norm;
  return rec;
}

// trials random-y trials per noise level, plus the two constant vectors.
inline PrivacySweepResult run_privacy_sweep(const ExperimentPlan& plan, double lambda,
                                            std::span<const double> beta_grid, int trials,
                                            NoiseFamily noise_family = NoiseFamily::uniform_inf,
                                            bool include_constant_y = true) {
  plan.validate();
  if (trials < 1) throw std::invalid_argument("run_privacy_sweep: trials must be >= 1");
  for (double b : beta_grid)
    if (!(b >= 0.0)) throw std::invalid_argument("run_privacy_sweep: negative noise level");
  const GridPoint point = plan.grid.front();
  const DistributionSpec dist = plan.dist.with_dimension(point.d);

  struct Job {
    double beta;
    std::size_t beta_index;
    int trial;
    std::string y_kind;
  };
  std::vector<Job> jobs;
  const int per_level = trials + (include_constant_y ? 2 : 0);
  for (std::size_t bi = 0; bi < beta_grid.size(); ++bi) {
    for (int t = 0; t < per_level; ++t) {
      std::string kind = "random";
      if (include_constant_y && t == trials) kind = "zeros";
      if (include_constant_y && t == trials + 1) kind = "ones";
      jobs.push_back({beta_grid[bi], bi, t, kind});
    }
  }

  PrivacySweepResult out;
  out.trials.resize(jobs.size());
  parallel_for(jobs.size(), plan.threads, [&](std::size_t idx) {
    const Job& job = jobs[idx];
    const std::uint64_t seed = run_seed(plan.base_seed, point.n, point.d,
                                        static_cast<int>(job.beta_index * 100000 + job.trial));
    out.trials[idx] = run_attack_trial(dist, plan.kernel, point.n, lambda, noise_family,
                                       job.beta, seed, job.y_kind);
  });

  for (std::size_t bi = 0; bi < beta_grid.size(); ++bi) {
    std::vector<double> hams, bounds_v;
    for (std::size_t idx = 0; idx < jobs.size(); ++idx) {
      if (jobs[idx].beta_index != bi) continue;
      hams.push_back(static_cast<double>(out.trials[idx].hamming));
      bounds_v.push_back(out.trials[idx].lemma_bound);
    }
    out.summary.push_back(
        {beta_grid[bi], detail::median(std::move(hams)), detail::median(std::move(bounds_v))});
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV schemas

inline std::string records_to_csv(std::span<const ExperimentRecord> records) {
  std::string out = "n,d,run,seed,measured_norm,predicted_bound,regime,wall_time_s\n";
  for (const auto& r : records) {
    out += format_u64(r.n);
    out += ',';
    out += format_u64(r.d);
    out += ',';
    out += std::to_string(r.run);
    out += ',';
    out += format_u64(r.seed);
    out += ',';
    out += format_double(r.measured_norm);
    out += ',';
    out += format_double(r.predicted_bound);
    out += ',';
    out += r.regime;
    out += ',';
    out += format_double(r.wall_time_s);
    out += '\n';
  }
  return out;
}

inline std::string attack_trials_to_csv(std::span<const AttackTrialRecord> trials) {
  std::string out = "seed,beta,hamming,recovered_fraction,lemma_bound,spectral_norm\n";
  for (const auto& t : trials) {
    out += format_u64(t.seed);
    out += ',';
    out += format_double(t.beta);
    out += ',';
    out += format_u64(t.hamming);
    out += ',';
    out += format_double(t.recovered_fraction);
    out += ',';
    out += format_double(t.lemma_bound);
    out += ',';
    out += format_double(t.spectral_norm);
    out += '\n';
  }
  return out;
}

inline std::string privacy_summary_to_csv(std::span<const PrivacySummaryRow> rows) {
  std::string out = "beta,median_hamming,lemma_bound\n";
  for (const auto& r : rows) {
    out += format_double(r.beta);
    out += ',';
    out += format_double(r.median_hamming);
    out += ',';
    out += format_double(r.lemma_bound);
    out += '\n';
  }
  return out;
}

}  // namespace rkm
