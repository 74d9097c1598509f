// minisvm command-line front end: single solves, mini-batch sweeps,
// spectral-norm reports and synthetic dataset generation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minisvm/minisvm.hpp"

namespace {

using namespace minisvm;

Dataset load_dataset(const std::string& path, bool do_normalize) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  Dataset ds = parse_libsvm(in);
  return do_normalize ? normalize(ds) : ds;
}

void write_text(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << body;
}

struct CommonOpts {
  std::string train, test, out;
  std::string solver = "sdca_safe";
  double lambda = 1e-3;
  std::string preset;
  int batch = 1;
  std::vector<int> batch_list;
  long iters = 10000;
  double epsilon = 1e-3;
  std::optional<double> beta_override;
  double gamma = 0.95;
  std::string averaging = "final";
  std::uint64_t seed = 0;
  long checkpoint_every = 0;
  bool no_normalize = false;
  bool stop_on_target = false;
  bool deterministic_reduction = false;
};

void add_common_flags(CLI::App* cmd, CommonOpts& o, bool needs_train) {
  auto* train = cmd->add_option("--train", o.train, "training set (LIBSVM text)");
  if (needs_train) train->required();
  cmd->add_option("--test", o.test, "held-out test set (LIBSVM text)");
  cmd->add_option("--solver", o.solver,
                  "pegasos|sdca_naive|sdca_safe|sdca_aggressive|sdca_serial");
  cmd->add_option("--lambda", o.lambda, "regularization parameter");
  cmd->add_option("--preset", o.preset,
                  "named lambda preset (cov, rcv1, astro-ph, news20)");
  cmd->add_option("--batch", o.batch, "mini-batch size b");
  cmd->add_option("--batch-list", o.batch_list, "b values for sweep mode")
      ->delimiter(',');
  cmd->add_option("--iters", o.iters, "iteration budget T");
  cmd->add_option("--epsilon", o.epsilon, "target accuracy");
  double beta_override_val = 0.0;
  cmd->add_option_function<double>(
      "--beta-override",
      [&o](double v) { o.beta_override = v; },
      "use this beta instead of beta_b(n, b, sigma^2)");
  (void)beta_override_val;
  cmd->add_option("--gamma", o.gamma, "aggressive step-size adaptation rate");
  cmd->add_option("--averaging", o.averaging,
                  "tail|decaying|final|schedule");
  cmd->add_option("--seed", o.seed, "master RNG seed");
  cmd->add_option("--checkpoint-every", o.checkpoint_every,
                  "checkpoint cadence in iterations (0 = one epoch)");
  cmd->add_flag("--no-normalize", o.no_normalize,
                "skip global max-norm normalization");
  cmd->add_flag("--stop-on-target", o.stop_on_target,
                "stop once the duality gap reaches --epsilon");
  cmd->add_flag("--deterministic-reduction", o.deterministic_reduction,
                "fix the reduction order (already the default: ascending "
                "index, single-threaded)");
  cmd->add_option("--out", o.out, "output path ('-' for stdout)");
}

SolverConfig make_config(const CommonOpts& o) {
  SolverConfig cfg;
  cfg.kind = solver_kind_from_string(o.solver);
  cfg.lambda = o.lambda;
  if (!o.preset.empty()) {
    const auto& presets = lambda_presets();
    auto it = presets.find(o.preset);
    if (it == presets.end()) {
      throw std::runtime_error("unknown preset '" + o.preset + "'");
    }
    cfg.lambda = it->second;
  }
  cfg.b = o.batch;
  cfg.max_iters = o.iters;
  cfg.beta_override = o.beta_override;
  cfg.gamma = o.gamma;
  cfg.averaging = averaging_from_string(o.averaging);
  cfg.seed = o.seed;
  cfg.checkpoint_every = o.checkpoint_every;
  return cfg;
}

int cmd_solve(const CommonOpts& o) {
  const Dataset train = load_dataset(o.train, !o.no_normalize);
  Dataset test;
  RunOptions opt;
  opt.epsilon_target = o.epsilon;
  opt.stop_on_target = o.stop_on_target;
  if (!o.test.empty()) {
    test = load_dataset(o.test, !o.no_normalize);
    opt.test_ds = &test;
  }
  const SolverConfig cfg = make_config(o);
  const RunResult res = run_solve(train, cfg, opt);
  write_text(o.out, run_csv(res, cfg));
  std::fprintf(stderr,
               "solver=%s b=%d iters=%ld primal=%.10g dual=%.10g gap=%.10g "
               "wall=%.3fs\n",
               to_string(cfg.kind), cfg.b, res.iterations_run,
               res.final_report.primal, res.final_report.dual,
               res.final_report.gap, res.wall_time_s);
  if (o.stop_on_target && !res.reached_target) return 2;
  return 0;
}

int cmd_sweep(const CommonOpts& o) {
  if (o.batch_list.empty()) {
    throw std::runtime_error("sweep mode requires --batch-list");
  }
  const Dataset train = load_dataset(o.train, !o.no_normalize);
  std::vector<SolverKind> kinds;
  std::stringstream ss(o.solver);
  std::string name;
  while (std::getline(ss, name, ',')) {
    kinds.push_back(solver_kind_from_string(name));
  }
  SolverConfig base = make_config(o);
  RunOptions opt;
  opt.epsilon_target = o.epsilon;
  const auto rows = run_sweep(train, kinds, o.batch_list, base, opt);
  write_text(o.out, sweep_csv(rows, o.epsilon));
  return 0;
}

int cmd_sigma(const CommonOpts& o) {
  const Dataset train = load_dataset(o.train, !o.no_normalize);
  const SpectralEstimate est = spectral_norm_sq(train);
  std::size_t nnz = 0;
  for (const auto& ex : train.examples) nnz += ex.nnz();
  const int n = static_cast<int>(train.n());
  std::printf("n=%d d=%d nnz=%zu\n", n, train.dim, nnz);
  std::printf("sigma_sq=%.10g (inflation=%.3g, iters=%d, converged=%s)\n",
              est.sigma_sq, est.inflation, est.iterations_used,
              est.converged ? "yes" : "no");
  const std::vector<int>& bs =
      o.batch_list.empty() ? std::vector<int>{1, 2, 4, 8, 16} : o.batch_list;
  std::printf("%6s %12s %12s\n", "b", "beta_b", "beta_b/b");
  for (int b : bs) {
    if (b < 1 || b > n) continue;
    const double bb = beta_b(n, b, est.sigma_sq);
    std::printf("%6d %12.6g %12.6g\n", b, bb, bb / b);
  }
  return 0;
}

int cmd_synth(const std::string& kind, int n, int d, double sigma_target,
              std::uint64_t seed, const std::string& out) {
  Dataset ds;
  if (kind == "orthogonal") {
    ds = make_orthogonal(n, d);
  } else if (kind == "duplicated") {
    ds = make_duplicated(n);
  } else if (kind == "gaussian") {
    ds = make_gaussian(n, d, sigma_target, seed);
  } else {
    throw std::runtime_error("unknown synthetic kind '" + kind + "'");
  }
  std::ostringstream body;
  write_libsvm(ds, body);
  write_text(out, body.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mini-batch SVM training and benchmarking"};
  app.require_subcommand(1);

  CommonOpts solve_o, sweep_o, sigma_o;
  auto* solve = app.add_subcommand("solve", "run a single solver");
  add_common_flags(solve, solve_o, true);
  auto* sweep = app.add_subcommand("sweep", "sweep mini-batch sizes");
  add_common_flags(sweep, sweep_o, true);
  auto* sigma = app.add_subcommand("sigma", "spectral-norm report");
  add_common_flags(sigma, sigma_o, true);

  std::string synth_kind = "gaussian", synth_out;
  int synth_n = 100, synth_d = 10;
  double synth_sigma = 0.1;
  std::uint64_t synth_seed = 0;
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--kind", synth_kind, "orthogonal|duplicated|gaussian")
      ->required();
  synth->add_option("--n", synth_n, "number of examples")->required();
  synth->add_option("--d", synth_d, "dimension");
  synth->add_option("--sigma-target", synth_sigma,
                    "target sigma^2 for gaussian data");
  synth->add_option("--seed", synth_seed, "RNG seed");
  synth->add_option("--out", synth_out, "output path ('-' for stdout)");

  try {
    app.parse(argc, argv);
    if (solve->parsed()) return cmd_solve(solve_o);
    if (sweep->parsed()) return cmd_sweep(sweep_o);
    if (sigma->parsed()) return cmd_sigma(sigma_o);
    if (synth->parsed()) {
      return cmd_synth(synth_kind, synth_n, synth_d, synth_sigma, synth_seed,
                       synth_out);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
