#pragma once

#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "minisvm/dataset.hpp"
#include "minisvm/linalg.hpp"
#include "minisvm/objectives.hpp"
#include "minisvm/sampler.hpp"
#include "minisvm/solvers.hpp"
#include "minisvm/trace.hpp"

namespace minisvm {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Regularization presets from the standard benchmark collection.
inline const std::map<std::string, double>& lambda_presets() {
  static const std::map<std::string, double> presets = {
      {"cov", 1e-5},
      {"rcv1", 1e-4},
      {"astro-ph", 5e-5},
      {"news20", 1.25e-4},
  };
  return presets;
}

struct RunResult {
  std::vector<TraceRecord> trace;
  GapReport final_report;
  double sigma_sq = 0.0;
  double beta_b = 0.0;
  long iterations_run = 0;
  bool reached_target = false;
  std::optional<long> iterations_to_target;  // by duality gap
  std::optional<long> iterations_to_primal_target;  // vs. reference P*
  long rejected_steps = 0;
  double wall_time_s = 0.0;
};

struct RunOptions {
  double epsilon_target = 1e-3;
  bool stop_on_target = false;      // stop as soon as gap <= epsilon_target
  std::optional<double> sigma_override;
  std::optional<double> primal_reference;  // P* for suboptimality targets
  const Dataset* test_ds = nullptr;
};

inline double resolve_sigma_sq(const Dataset& ds, const RunOptions& opt) {
  if (opt.sigma_override) return *opt.sigma_override;
  return spectral_norm_sq(ds).sigma_sq;
}

// Runs one solver to cfg.max_iters, or until the duality gap at a
// checkpoint reaches epsilon_target when stop_on_target is set.
// Checkpoints evaluate the averaged iterate's primal objective and, for
// dual solvers, D(alpha) of the current dual iterate.
inline RunResult run_solve(const Dataset& ds, SolverConfig cfg,
                           const RunOptions& opt = {}) {
  const auto t_start = std::chrono::steady_clock::now();
  const int n = static_cast<int>(ds.n());
  if (cfg.checkpoint_every <= 0) {
    cfg.checkpoint_every = (n + cfg.b - 1) / cfg.b;  // about one epoch
  }
  RunResult res;
  res.sigma_sq = resolve_sigma_sq(ds, opt);
  Solver solver(ds, cfg, res.sigma_sq);
  res.beta_b = solver.beta_b_value();

  BatchSampler sampler(n);
  Rng rng(cfg.seed);

  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t_start)
        .count();
  };

  const auto checkpoint = [&](long iter) {
    TraceRecord rec;
    rec.iter = iter;
    rec.epoch_equiv =
        static_cast<double>(iter) * cfg.b / static_cast<double>(n);
    const DenseVector w_report = solver.averaged_w();
    rec.primal = primal_objective(ds, w_report, cfg.lambda);
    if (solver.is_dual()) {
      rec.dual = dual_objective(ds, solver.alpha(), solver.w(), cfg.lambda);
      rec.gap = rec.primal - *rec.dual;
    }
    if (opt.test_ds != nullptr) {
      rec.test_error = test_error(*opt.test_ds, w_report);
    }
    if (cfg.kind == SolverKind::sdca_aggressive) rec.beta_t = solver.beta_t();
    rec.elapsed_s = elapsed();
    res.trace.push_back(rec);

    if (rec.gap && !res.iterations_to_target && *rec.gap <= opt.epsilon_target) {
      res.iterations_to_target = iter;
    }
    if (opt.primal_reference && !res.iterations_to_primal_target &&
        rec.primal - *opt.primal_reference <= opt.epsilon_target) {
      res.iterations_to_primal_target = iter;
    }
    return rec;
  };

  for (long it = 1; it <= cfg.max_iters; ++it) {
    solver.step(sampler.draw(cfg.b, rng));
    if (it % cfg.checkpoint_every == 0 || it == cfg.max_iters) {
      checkpoint(it);
      if (opt.stop_on_target && res.iterations_to_target) break;
    }
    res.iterations_run = it;
  }
  if (res.trace.empty()) checkpoint(cfg.max_iters);
  res.iterations_run = res.trace.back().iter;
  res.rejected_steps = solver.rejected_steps();

  const DenseVector w_final = solver.averaged_w();
  res.final_report.primal = primal_objective(ds, w_final, cfg.lambda);
  if (solver.is_dual()) {
    res.final_report.dual =
        dual_objective(ds, solver.alpha(), solver.w(), cfg.lambda);
    res.final_report.gap = res.final_report.primal - res.final_report.dual;
    res.reached_target = res.iterations_to_target.has_value();
  } else {
    res.final_report.dual = std::nan("");
    res.final_report.gap = std::nan("");
    res.reached_target = res.iterations_to_primal_target.has_value();
  }
  if (opt.test_ds != nullptr) {
    res.final_report.test_error = test_error(*opt.test_ds, w_final);
  }
  res.wall_time_s = elapsed();
  return res;
}

// Serial SDCA to duality gap <= tol; the returned primal value is within
// tol of the optimum by the gap certificate.
inline double reference_primal_optimum(const Dataset& ds, double lambda,
                                       double tol = 1e-7,
                                       long max_iters = 50'000'000) {
  SolverConfig cfg;
  cfg.kind = SolverKind::sdca_serial;
  cfg.lambda = lambda;
  cfg.b = 1;
  cfg.max_iters = max_iters;
  cfg.seed = 0xfeedbeef;
  cfg.checkpoint_every = static_cast<long>(ds.n());
  RunOptions opt;
  opt.epsilon_target = tol;
  opt.stop_on_target = true;
  const RunResult r = run_solve(ds, cfg, opt);
  if (!r.reached_target) {
    throw std::runtime_error("reference solve did not reach gap tolerance");
  }
  return r.final_report.primal;
}

// '#'-prefixed header comments (excluded from the determinism contract)
// followed by the column row and data rows.
inline std::string run_csv(const RunResult& res, const SolverConfig& cfg,
                           bool include_header = true) {
  std::ostringstream out;
  if (include_header) {
    out.precision(17);
    out << "# minisvm " << kLibraryVersion << "\n"
        << "# solver=" << to_string(cfg.kind) << " lambda=" << cfg.lambda
        << " b=" << cfg.b << " T=" << cfg.max_iters
        << " gamma=" << cfg.gamma
        << " averaging=" << to_string(cfg.averaging)
        << " seed=" << cfg.seed
        << " checkpoint_every=" << cfg.checkpoint_every << "\n"
        << "# sigma_sq=" << res.sigma_sq << " beta_b=" << res.beta_b
        << " generator=" << kGeneratorName << "\n"
        << "# wall_time_s=" << res.wall_time_s << "\n";
  }
  out << trace_csv_columns() << "\n";
  for (const auto& rec : res.trace) out << trace_csv_row(rec) << "\n";
  return out.str();
}

struct SweepRow {
  SolverKind kind;
  int b = 0;
  double beta_b = 0.0;
  double beta_b_over_b = 0.0;
  std::optional<long> iters_to_gap_target;
  std::optional<long> iters_to_primal_target;
};

// For each (solver, b) cell: iterations to the gap target and to the
// primal-suboptimality target (vs. a serial-SDCA reference optimum),
// plus the analytic beta_b/b column computed from the same sigma^2 the
// safe solver uses.
inline std::vector<SweepRow> run_sweep(const Dataset& ds,
                                       const std::vector<SolverKind>& kinds,
                                       const std::vector<int>& b_values,
                                       SolverConfig base_cfg,
                                       RunOptions opt = {}) {
  if (b_values.empty()) {
    throw std::invalid_argument("sweep requires a nonempty b list");
  }
  const double sigma_sq = resolve_sigma_sq(ds, opt);
  opt.sigma_override = sigma_sq;
  if (!opt.primal_reference) {
    opt.primal_reference = reference_primal_optimum(ds, base_cfg.lambda);
  }
  std::vector<SweepRow> rows;
  std::uint64_t cell = 0;
  for (SolverKind kind : kinds) {
    for (int b : b_values) {
      SolverConfig cfg = base_cfg;
      cfg.kind = kind;
      cfg.b = (kind == SolverKind::sdca_serial) ? 1 : b;
      cfg.seed = derive_seed(base_cfg.seed, cell++);
      cfg.checkpoint_every = 1;  // exact iteration counts
      RunOptions cell_opt = opt;
      cell_opt.stop_on_target = false;
      const RunResult r = run_solve(ds, cfg, cell_opt);
      SweepRow row;
      row.kind = kind;
      row.b = cfg.b;
      row.beta_b = r.beta_b;
      row.beta_b_over_b = r.beta_b / cfg.b;
      row.iters_to_gap_target = r.iterations_to_target;
      row.iters_to_primal_target = r.iterations_to_primal_target;
      rows.push_back(row);
    }
  }
  return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows,
                             double epsilon_target) {
  std::ostringstream out;
  out.precision(17);
  out << "# minisvm " << kLibraryVersion << " sweep epsilon="
      << epsilon_target << "\n";
  out << "solver,b,beta_b,beta_b_over_b,iters_to_gap_target,"
         "iters_to_primal_target\n";
  for (const auto& r : rows) {
    out << to_string(r.kind) << ',' << r.b << ',' << detail::fmt17(r.beta_b)
        << ',' << detail::fmt17(r.beta_b_over_b) << ','
        << (r.iters_to_gap_target ? std::to_string(*r.iters_to_gap_target)
                                  : std::string("not_reached"))
        << ','
        << (r.iters_to_primal_target
                ? std::to_string(*r.iters_to_primal_target)
                : std::string("not_reached"))
        << "\n";
  }
  return out.str();
}

}  // namespace minisvm
