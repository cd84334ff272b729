// rkm: random kernel matrix norms, kernel ridge regression, and the
// coefficient-release reconstruction attack, behind one binary.
//
// Exit codes: 0 success, 1 runtime failure, 2 invalid arguments.

#include <cstdlib>
#include <deque>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rkm/rkm.hpp"

using nlohmann::ordered_json;
using namespace rkm;

namespace {

// ---------------------------------------------------------------------------
// shared option groups

struct DistCli {
  std::string family = "normal";
  std::size_t d = 100;
  double radius = 0.0;      // 0 -> sqrt(d)
  double half_width = 1.0;

  DistributionSpec resolve() const {
    if (family == "normal") return DistributionSpec::standard_normal(d);
    if (family == "rademacher") return DistributionSpec::rademacher(d);
    if (family == "sphere")
      return DistributionSpec::uniform_sphere(
          d, radius > 0.0 ? radius : std::sqrt(static_cast<double>(d)));
    if (family == "bounded") return DistributionSpec::bounded_uniform(d, half_width);
    if (family == "mixture") return DistributionSpec::zero_or_sphere_mixture(d);
    throw CLI::ValidationError("--dist", "unknown distribution '" + family + "'");
  }
};

void add_dist_options(CLI::App* cmd, DistCli& dist, bool with_dim = true) {
  cmd->add_option("--dist", dist.family, "data distribution")
      ->check(CLI::IsMember({"normal", "rademacher", "sphere", "bounded", "mixture"}))
      ->capture_default_str();
  if (with_dim)
    cmd->add_option("--d", dist.d, "ambient dimension")->check(CLI::PositiveNumber)
        ->capture_default_str();
  cmd->add_option("--radius", dist.radius, "sphere radius (default: sqrt(d))");
  cmd->add_option("--half-width", dist.half_width, "bounded-uniform half-width")
      ->capture_default_str();
}

struct KernelCli {
  std::string family = "gaussian";
  double a = 1.0;
  double b = 1.0;
  int p = 4;

  KernelSpec resolve() const {
    if (family == "poly") return KernelSpec::polynomial(a, b, p);
    if (family == "gaussian") return KernelSpec::gaussian(a);
    if (family == "laplacian") return KernelSpec::laplacian(a);
    throw CLI::ValidationError("--kernel", "unknown kernel '" + family + "'");
  }
};

void add_kernel_options(CLI::App* cmd, KernelCli& kernel) {
  cmd->add_option("--kernel", kernel.family, "kernel family")
      ->check(CLI::IsMember({"poly", "gaussian", "laplacian"}))
      ->capture_default_str();
  cmd->add_option("--a", kernel.a, "kernel parameter a")->capture_default_str();
  cmd->add_option("--b", kernel.b, "polynomial offset b")->capture_default_str();
  cmd->add_option("--p", kernel.p, "polynomial degree")->capture_default_str();
}

struct BoundCli {
  std::string config_path;
  double c0 = 0.0, c0_refined = 0.0, c0_lower = 0.0, c1 = 0.0, delta = 0.0;
  CLI::Option *c0_opt = nullptr, *c0r_opt = nullptr, *c0l_opt = nullptr, *c1_opt = nullptr,
              *delta_opt = nullptr;

  BoundConfig resolve() const {
    BoundConfig cfg;
    std::string path = config_path;
    if (path.empty())
      if (const char* env = std::getenv("RKM_CONFIG")) path = env;
    if (!path.empty()) {
      std::ifstream in(path);
      if (!in) throw std::runtime_error("cannot open config file: " + path);
      ordered_json doc = ordered_json::parse(in);
      if (doc.contains("C0")) cfg.C0 = doc["C0"].get<double>();
      if (doc.contains("C0_refined")) cfg.C0_refined = doc["C0_refined"].get<double>();
      if (doc.contains("c0_lower")) cfg.c0_lower = doc["c0_lower"].get<double>();
      if (doc.contains("c1_threshold")) cfg.c1_threshold = doc["c1_threshold"].get<double>();
      if (doc.contains("delta")) cfg.delta = doc["delta"].get<double>();
    }
    if (c0_opt && c0_opt->count()) cfg.C0 = c0;
    if (c0r_opt && c0r_opt->count()) cfg.C0_refined = c0_refined;
    if (c0l_opt && c0l_opt->count()) cfg.c0_lower = c0_lower;
    if (c1_opt && c1_opt->count()) cfg.c1_threshold = c1;
    if (delta_opt && delta_opt->count()) cfg.delta = delta;
    cfg.validate();
    return cfg;
  }
};

void add_bound_options(CLI::App* cmd, BoundCli& bounds) {
  cmd->add_option("--config", bounds.config_path,
                  "JSON config with bound constants (env: RKM_CONFIG)");
  bounds.c0_opt = cmd->add_option("--C0", bounds.c0, "polynomial bound constant (default 1)");
  bounds.c0r_opt =
      cmd->add_option("--C0-refined", bounds.c0_refined, "refined bound constant (default 1)");
  bounds.c0l_opt =
      cmd->add_option("--c0-lower", bounds.c0_lower, "lower-regime margin (default 0.5)");
  bounds.c1_opt =
      cmd->add_option("--c1", bounds.c1, "small-a regime threshold constant (default 0.01)");
  bounds.delta_opt = cmd->add_option("--delta", bounds.delta, "upper-regime slack (default 1)");
}

ordered_json dist_json(const DistributionSpec& d) {
  ordered_json j;
  j["family"] = family_name(d.family);
  j["dimension"] = d.dimension;
  if (d.family == DistFamily::uniform_sphere) j["radius"] = d.radius;
  if (d.family == DistFamily::bounded_uniform) j["half_width"] = d.half_width;
  return j;
}

ordered_json kernel_json(const KernelSpec& k) {
  ordered_json j;
  j["family"] = family_name(k.family);
  j["a"] = k.a;
  if (k.family == KernelFamily::polynomial) {
    j["b"] = k.b;
    j["p"] = k.degree;
  }
  return j;
}

ordered_json bounds_json(const BoundConfig& cfg) {
  ordered_json j;
  j["C0"] = cfg.C0;
  j["C0_refined"] = cfg.C0_refined;
  j["c0_lower"] = cfg.c0_lower;
  j["c1_threshold"] = cfg.c1_threshold;
  j["delta"] = cfg.delta;
  return j;
}

ordered_json plan_json(const std::string& command, const ExperimentPlan& plan) {
  ordered_json grid = ordered_json::array();
  for (const auto& g : plan.grid) grid.push_back({{"n", g.n}, {"d", g.d}});
  ordered_json j;
  j["command"] = command;
  j["grid"] = grid;
  j["runs_per_point"] = plan.runs_per_point;
  j["kernel"] = kernel_json(plan.kernel);
  j["dist"] = dist_json(plan.dist);
  j["base_seed"] = plan.base_seed;
  j["bounds"] = bounds_json(plan.bounds);
  j["memory_ceiling_bytes"] = plan.memory_ceiling_bytes;
  j["threads"] = plan.threads;
  return j;
}

ordered_json summary_json(std::span<const ExperimentRecord> records) {
  ordered_json arr = ordered_json::array();
  for (const auto& s : summarize_records(records)) {
    ordered_json row;
    row["n"] = s.n;
    row["d"] = s.d;
    row["runs"] = s.runs;
    row["mean_norm"] = s.mean_norm;
    row["max_norm"] = s.max_norm;
    row["min_norm"] = s.min_norm;
    arr.push_back(row);
  }
  return arr;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
}

std::string sidecar_path(const std::string& csv_path) {
  if (csv_path.size() >= 4 && csv_path.substr(csv_path.size() - 4) == ".csv")
    return csv_path.substr(0, csv_path.size() - 4) + ".json";
  return csv_path + ".json";
}

// CSV to --out (plus provenance sidecar) or to stdout
void emit_sweep(const std::string& out_path, const std::string& csv, const ordered_json& meta) {
  if (out_path.empty()) {
    std::cout << csv;
    return;
  }
  write_text(out_path, csv);
  write_text(sidecar_path(out_path), meta.dump(2) + "\n");
}

std::vector<double> read_label_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open label file: " + path);
  std::vector<double> y;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    y.push_back(std::stod(comma == std::string::npos ? line : line.substr(0, comma)));
  }
  return y;
}

// ---------------------------------------------------------------------------
// subcommand state

struct CliState {
  // shared
  DistCli dist;
  KernelCli kernel;
  BoundCli bounds;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out_path;
  std::size_t n = 100;
  double lambda = 1.0;

  // sweeps
  std::vector<std::size_t> n_grid;
  int runs = 20;
  bool full_scale = false;
  double memory_ceiling_gb = 2.0;

  // sample / kernel-matrix
  bool header = false;

  // spectral
  double tolerance = 1e-9;
  int max_iterations = 0;

  // experiments
  double a_coeff = 0.1;
  double a_log_coeff = 10.0;

  // calibrate
  std::vector<int> p_list{4};
  std::vector<std::size_t> n_list{10, 100, 1000};

  // krr
  std::string y_kind = "random";
  std::uint64_t y_seed = 2;
  std::string label_file;

  // attack / privacy-sweep
  std::string noise = "uniform";
  double beta = 0.0;
  double sigma = 0.0;
  double noise_scale = 0.0;
  int trials = 20;
  std::vector<double> beta_grid;

  ExperimentPlan make_plan(const std::vector<std::size_t>& grid_ns) const {
    ExperimentPlan plan;
    plan.grid.clear();
    for (std::size_t gn : grid_ns) plan.grid.push_back({gn, dist.d});
    plan.runs_per_point = runs;
    plan.kernel = kernel.resolve();
    plan.dist = dist.resolve();
    plan.base_seed = seed;
    plan.bounds = bounds.resolve();
    plan.memory_ceiling_bytes =
        static_cast<std::size_t>(memory_ceiling_gb * 1024.0 * 1024.0 * 1024.0);
    plan.threads = threads;
    return plan;
  }

  NoiseFamily noise_family() const {
    if (noise == "uniform") return NoiseFamily::uniform_inf;
    if (noise == "gaussian") return NoiseFamily::gaussian_iid;
    if (noise == "laplace") return NoiseFamily::laplace_iid;
    throw CLI::ValidationError("--noise", "unknown noise family '" + noise + "'");
  }

  double noise_magnitude() const {
    switch (noise_family()) {
      case NoiseFamily::uniform_inf: return beta;
      case NoiseFamily::gaussian_iid: return sigma;
      case NoiseFamily::laplace_iid: return noise_scale;
      default: return 0.0;
    }
  }
};

void add_common(CLI::App* cmd, CliState& st) {
  cmd->add_option("--seed", st.seed, "master seed; all randomness derives from it")
      ->capture_default_str();
  cmd->add_option("--threads", st.threads, "work pool size (0 = hardware)")
      ->capture_default_str();
  cmd->add_option("--out", st.out_path, "output file (default: stdout)");
}

void add_sweep_common(CLI::App* cmd, CliState& st, std::vector<std::size_t> default_grid) {
  st.n_grid = std::move(default_grid);
  cmd->add_option("--n-grid", st.n_grid, "comma-separated matrix sizes")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--runs", st.runs, "runs per grid point")->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--mem-ceiling-gb", st.memory_ceiling_gb,
                  "skip grid points whose kernel matrix exceeds this")
      ->capture_default_str();
}

int run_sample(const CliState& st) {
  const SampleSet s = sample(st.dist.resolve(), st.n, st.seed, st.threads);
  const std::string csv = samples_to_csv(s, st.header);
  if (st.out_path.empty())
    std::cout << csv;
  else
    write_text(st.out_path, csv);
  return 0;
}

int run_kernel_matrix(const CliState& st) {
  const SampleSet s = sample(st.dist.resolve(), st.n, st.seed, st.threads);
  const KernelMatrix k = build_kernel_matrix(s, st.kernel.resolve(), st.threads);
  const std::string csv = matrix_to_csv(k.entries);
  if (st.out_path.empty())
    std::cout << csv;
  else
    write_text(st.out_path, csv);
  return 0;
}

int run_spectral_norm(const CliState& st) {
  const SampleSet s = sample(st.dist.resolve(), st.n, st.seed, st.threads);
  const KernelMatrix k = build_kernel_matrix(s, st.kernel.resolve(), st.threads);
  SpectralOptions opt;
  opt.tolerance = st.tolerance;
  opt.max_iterations = st.max_iterations;
  const SpectralResult res = spectral_norm(k, opt);
  ordered_json j;
  j["spectral_norm"] = res.spectral_norm;
  j["iterations"] = res.iterations;
  j["converged"] = res.converged;
  j["residual"] = res.residual;
  const std::string text = j.dump(2) + "\n";
  if (st.out_path.empty())
    std::cout << text;
  else
    write_text(st.out_path, text);
  return 0;
}

int run_figure1_cmd(const CliState& st) {
  std::vector<std::size_t> grid = st.n_grid;
  if (st.full_scale) grid.push_back(10000);
  ExperimentPlan plan = st.make_plan(grid);
  const auto records = run_figure1(plan);
  ordered_json meta = plan_json("figure1", plan);
  meta["summary"] = summary_json(records);
  emit_sweep(st.out_path, records_to_csv(records), meta);
  return 0;
}

int run_figure2_cmd(const CliState& st) {
  ExperimentPlan plan = st.make_plan(st.n_grid);
  const auto records = run_figure2(plan);
  ordered_json meta = plan_json("figure2", plan);
  meta["summary"] = summary_json(records);
  emit_sweep(st.out_path, records_to_csv(records), meta);
  return 0;
}

int run_lower_regime_cmd(const CliState& st) {
  ExperimentPlan plan = st.make_plan(st.n_grid);
  const auto records = run_lower_regime(plan, st.a_coeff);
  ordered_json meta = plan_json("lower-regime", plan);
  meta["a_coeff"] = st.a_coeff;
  meta["summary"] = summary_json(records);
  emit_sweep(st.out_path, records_to_csv(records), meta);
  return 0;
}

int run_mixture_cmd(const CliState& st) {
  ExperimentPlan plan = st.make_plan(st.n_grid);
  const auto records = run_mixture_counterexample(plan, st.a_log_coeff);
  ordered_json meta = plan_json("mixture", plan);
  meta["a_log_coeff"] = st.a_log_coeff;
  meta["summary"] = summary_json(records);
  emit_sweep(st.out_path, records_to_csv(records), meta);
  return 0;
}

int run_calibrate(const CliState& st) {
  const double c0 = calibrate_C0(
      st.dist.resolve(), st.dist.d, st.p_list, st.n_list, st.runs, st.kernel.a, st.kernel.b,
      st.seed,
      static_cast<std::size_t>(st.memory_ceiling_gb * 1024.0 * 1024.0 * 1024.0), st.threads);
  BoundConfig cfg = st.bounds.resolve();
  cfg.C0 = c0;
  ordered_json j = bounds_json(cfg);
  j["calibration"] = {{"dist", dist_json(st.dist.resolve())},
                      {"d", st.dist.d},
                      {"p_list", st.p_list},
                      {"n_list", st.n_list},
                      {"runs", st.runs},
                      {"a", st.kernel.a},
                      {"b", st.kernel.b},
                      {"seed", st.seed}};
  const std::string text = j.dump(2) + "\n";
  if (st.out_path.empty())
    std::cout << text;
  else
    write_text(st.out_path, text);
  return 0;
}

int run_krr(const CliState& st) {
  const SampleSet s = sample(st.dist.resolve(), st.n, st.seed, st.threads);
  std::vector<double> y;
  if (!st.label_file.empty()) {
    y = read_label_file(st.label_file);
    if (y.size() != st.n)
      throw std::runtime_error("label file has " + std::to_string(y.size()) +
                               " rows, expected " + std::to_string(st.n));
  } else if (st.y_kind == "zeros") {
    y.assign(st.n, 0.0);
  } else if (st.y_kind == "ones") {
    y.assign(st.n, 1.0);
  } else {
    Rng rng(st.y_seed);
    y.resize(st.n);
    for (double& v : y) v = rng.next_bool() ? 1.0 : 0.0;
  }
  const RidgeModel model = fit(s, y, st.kernel.resolve(), st.lambda, st.threads);
  ordered_json j;
  j["lambda"] = model.lambda;
  j["spec"] = kernel_json(model.spec);
  j["alpha"] = model.alpha;
  j["seed_of_support"] = model.support.seed;
  const std::string text = j.dump(2) + "\n";
  if (st.out_path.empty())
    std::cout << text;
  else
    write_text(st.out_path, text);
  return 0;
}

int run_attack(const CliState& st) {
  const DistributionSpec dist = st.dist.resolve();
  const KernelSpec kernel = st.kernel.resolve();
  std::vector<AttackTrialRecord> trials(st.trials);
  parallel_for(trials.size(), st.threads, [&](std::size_t t) {
    const std::uint64_t trial_seed = run_seed(st.seed, st.n, st.dist.d, static_cast<int>(t));
    trials[t] = run_attack_trial(dist, kernel, st.n, st.lambda, st.noise_family(),
                                 st.noise_magnitude(), trial_seed, "random");
  });
  ordered_json meta;
  meta["command"] = "attack";
  meta["n"] = st.n;
  meta["dist"] = dist_json(dist);
  meta["kernel"] = kernel_json(kernel);
  meta["lambda"] = st.lambda;
  meta["noise"] = st.noise;
  meta["magnitude"] = st.noise_magnitude();
  meta["trials"] = st.trials;
  meta["base_seed"] = st.seed;
  emit_sweep(st.out_path, attack_trials_to_csv(trials), meta);
  return 0;
}

int run_privacy_sweep_cmd(const CliState& st) {
  ExperimentPlan plan = st.make_plan({st.n});
  std::vector<double> betas = st.beta_grid;
  if (betas.empty()) {
    const double t =
        noise_threshold(plan.kernel, st.dist.d, st.n, st.lambda, plan.bounds);
    betas = {0.0, t / 4.0, t / 2.0, t, 2.0 * t, 4.0 * t};
  }
  const auto sweep = run_privacy_sweep(plan, st.lambda, betas, st.trials);
  ordered_json meta = plan_json("privacy-sweep", plan);
  meta["lambda"] = st.lambda;
  meta["beta_grid"] = betas;
  meta["trials_per_beta"] = st.trials;
  emit_sweep(st.out_path, privacy_summary_to_csv(sweep.summary), meta);
  if (!st.out_path.empty()) {
    const std::string trials_path = sidecar_path(st.out_path) + ".trials.csv";
    write_text(trials_path, attack_trials_to_csv(sweep.trials));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random kernel matrix spectral norms and KRR reconstruction attacks"};
  app.require_subcommand(1);

  // each subcommand owns its state so per-command defaults stay independent
  std::deque<CliState> states;
  std::vector<std::pair<CLI::App*, int (*)(const CliState&)>> dispatch;
  auto register_cmd = [&](CLI::App* cmd, int (*fn)(const CliState&)) -> CliState& {
    states.emplace_back();
    dispatch.emplace_back(cmd, fn);
    return states.back();
  };

  auto* sample_cmd = app.add_subcommand("sample", "draw a seeded sample set as CSV");
  {
    CliState& st = register_cmd(sample_cmd, run_sample);
    add_dist_options(sample_cmd, st.dist);
    sample_cmd->add_option("--n", st.n, "number of draws")->check(CLI::PositiveNumber)
        ->capture_default_str();
    sample_cmd->add_flag("--header", st.header, "emit a header row");
    add_common(sample_cmd, st);
  }

  auto* km_cmd = app.add_subcommand("kernel-matrix", "build a kernel matrix as CSV");
  {
    CliState& st = register_cmd(km_cmd, run_kernel_matrix);
    add_dist_options(km_cmd, st.dist);
    add_kernel_options(km_cmd, st.kernel);
    km_cmd->add_option("--n", st.n, "number of draws")->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_common(km_cmd, st);
  }

  auto* sn_cmd = app.add_subcommand("spectral-norm", "measure the spectral norm (JSON)");
  {
    CliState& st = register_cmd(sn_cmd, run_spectral_norm);
    add_dist_options(sn_cmd, st.dist);
    add_kernel_options(sn_cmd, st.kernel);
    sn_cmd->add_option("--n", st.n, "number of draws")->check(CLI::PositiveNumber)
        ->capture_default_str();
    sn_cmd->add_option("--tol", st.tolerance, "relative tolerance")->capture_default_str();
    sn_cmd->add_option("--max-iters", st.max_iterations, "iteration cap (0 = 10n)")
        ->capture_default_str();
    add_common(sn_cmd, st);
  }

  auto* f1_cmd = app.add_subcommand("figure1", "polynomial-kernel norm sweep");
  {
    CliState& st = register_cmd(f1_cmd, run_figure1_cmd);
    st.kernel.family = "poly";
    add_dist_options(f1_cmd, st.dist);
    add_kernel_options(f1_cmd, st.kernel);
    add_bound_options(f1_cmd, st.bounds);
    add_sweep_common(f1_cmd, st, {10, 32, 100, 316, 1000, 2000});
    f1_cmd->add_flag("--full-scale", st.full_scale, "append the n=10000 point");
    add_common(f1_cmd, st);
  }

  auto* f2_cmd = app.add_subcommand("figure2", "gaussian kernel at a = (2+delta) ln(n)/d");
  {
    CliState& st = register_cmd(f2_cmd, run_figure2_cmd);
    add_dist_options(f2_cmd, st.dist);
    add_bound_options(f2_cmd, st.bounds);
    add_sweep_common(f2_cmd, st, {10, 32, 100, 316, 1000, 2000});
    add_common(f2_cmd, st);
  }

  auto* lr_cmd = app.add_subcommand("lower-regime", "gaussian kernel at a = a-coeff/d");
  {
    CliState& st = register_cmd(lr_cmd, run_lower_regime_cmd);
    add_dist_options(lr_cmd, st.dist);
    add_bound_options(lr_cmd, st.bounds);
    add_sweep_common(lr_cmd, st, {200, 800});
    lr_cmd->add_option("--a-coeff", st.a_coeff, "a = a-coeff / d")->capture_default_str();
    add_common(lr_cmd, st);
  }

  auto* mx_cmd =
      app.add_subcommand("mixture", "zero-or-sphere counterexample at a = coeff ln(n)/d");
  {
    CliState& st = register_cmd(mx_cmd, run_mixture_cmd);
    st.dist.family = "mixture";
    add_dist_options(mx_cmd, st.dist);
    add_bound_options(mx_cmd, st.bounds);
    add_sweep_common(mx_cmd, st, {400});
    mx_cmd->add_option("--a-log-coeff", st.a_log_coeff, "a = coeff * ln(n) / d")
        ->capture_default_str();
    add_common(mx_cmd, st);
  }

  auto* cal_cmd = app.add_subcommand("calibrate", "calibrate C0 against a polynomial sweep");
  {
    CliState& st = register_cmd(cal_cmd, run_calibrate);
    st.kernel = KernelCli{"poly", 1.0, 1.0, 4};
    add_dist_options(cal_cmd, st.dist);
    add_bound_options(cal_cmd, st.bounds);
    cal_cmd->add_option("--p-list", st.p_list, "polynomial degrees")->delimiter(',')
        ->capture_default_str();
    cal_cmd->add_option("--n-list", st.n_list, "matrix sizes")->delimiter(',')
        ->capture_default_str();
    cal_cmd->add_option("--runs", st.runs, "runs per grid point")->check(CLI::PositiveNumber)
        ->capture_default_str();
    cal_cmd->add_option("--a", st.kernel.a, "kernel slope used for calibration")
        ->capture_default_str();
    cal_cmd->add_option("--b", st.kernel.b, "kernel offset used for calibration")
        ->capture_default_str();
    cal_cmd->add_option("--mem-ceiling-gb", st.memory_ceiling_gb, "per-point memory ceiling")
        ->capture_default_str();
    add_common(cal_cmd, st);
  }

  auto* krr_cmd = app.add_subcommand("krr", "fit kernel ridge regression, export the model");
  {
    CliState& st = register_cmd(krr_cmd, run_krr);
    add_dist_options(krr_cmd, st.dist);
    add_kernel_options(krr_cmd, st.kernel);
    krr_cmd->add_option("--n", st.n, "number of samples")->check(CLI::PositiveNumber)
        ->capture_default_str();
    krr_cmd->add_option("--lambda", st.lambda, "ridge regularization")->required();
    krr_cmd->add_option("--y", st.y_kind, "generated labels")
        ->check(CLI::IsMember({"random", "zeros", "ones"}))
        ->capture_default_str();
    krr_cmd->add_option("--y-seed", st.y_seed, "seed for generated labels")
        ->capture_default_str();
    krr_cmd->add_option("--labels", st.label_file, "CSV file with one label per row");
    add_common(krr_cmd, st);
  }

  auto* atk_cmd = app.add_subcommand("attack", "noisy-release reconstruction trials (CSV)");
  {
    CliState& st = register_cmd(atk_cmd, run_attack);
    st.kernel.a = 0.5;
    add_dist_options(atk_cmd, st.dist);
    add_kernel_options(atk_cmd, st.kernel);
    atk_cmd->add_option("--n", st.n, "records per trial")->check(CLI::PositiveNumber)
        ->capture_default_str();
    atk_cmd->add_option("--lambda", st.lambda, "ridge regularization")->required();
    atk_cmd->add_option("--noise", st.noise, "noise family")
        ->check(CLI::IsMember({"uniform", "gaussian", "laplace"}))
        ->capture_default_str();
    atk_cmd->add_option("--beta", st.beta, "uniform noise radius")->capture_default_str();
    atk_cmd->add_option("--sigma", st.sigma, "gaussian noise std")->capture_default_str();
    atk_cmd->add_option("--scale", st.noise_scale, "laplace noise scale")
        ->capture_default_str();
    atk_cmd->add_option("--trials", st.trials, "number of trials")->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_common(atk_cmd, st);
  }

  auto* ps_cmd = app.add_subcommand("privacy-sweep",
                                    "median decoding error across noise levels (CSV)");
  {
    CliState& st = register_cmd(ps_cmd, run_privacy_sweep_cmd);
    st.kernel.a = 0.5;
    add_dist_options(ps_cmd, st.dist);
    add_kernel_options(ps_cmd, st.kernel);
    add_bound_options(ps_cmd, st.bounds);
    ps_cmd->add_option("--n", st.n, "records per trial")->check(CLI::PositiveNumber)
        ->capture_default_str();
    ps_cmd->add_option("--lambda", st.lambda, "ridge regularization")->capture_default_str();
    ps_cmd->add_option("--beta-grid", st.beta_grid,
                       "noise radii (default: multiples of the noise threshold)")
        ->delimiter(',');
    ps_cmd->add_option("--trials", st.trials, "random-y trials per noise level")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_common(ps_cmd, st);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (std::size_t i = 0; i < dispatch.size(); ++i)
      if (dispatch[i].first->parsed()) return dispatch[i].second(states[i]);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;  // unreachable with require_subcommand(1)
}
