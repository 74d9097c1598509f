#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "minisvm/run.hpp"
#include "minisvm/synth.hpp"
#include "test_util.hpp"

using namespace minisvm;

namespace {

// data rows only: drop '#' comments and the column header
std::string csv_body(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  bool seen_columns = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    if (!seen_columns) {
      seen_columns = true;
      continue;
    }
    out << line << "\n";
  }
  return out.str();
}

}  // namespace

TEST_CASE("run_solve: safe solver closes the toy gap in one iteration") {
  Dataset ds = oracle::toy_duplicated_pair();
  SolverConfig cfg;
  cfg.kind = SolverKind::sdca_safe;
  cfg.lambda = 0.5;
  cfg.b = 2;
  cfg.max_iters = 10;
  cfg.checkpoint_every = 1;
  RunOptions opt;
  opt.epsilon_target = 1e-9;
  opt.stop_on_target = true;
  RunResult r = run_solve(ds, cfg, opt);
  CHECK(r.reached_target);
  REQUIRE(r.iterations_to_target.has_value());
  CHECK(*r.iterations_to_target == 1);
  CHECK(r.final_report.primal == Catch::Approx(0.25));
  CHECK(r.final_report.dual == Catch::Approx(0.25));
  CHECK(std::abs(r.final_report.gap) <= 1e-12);
  CHECK(r.sigma_sq == Catch::Approx(1.0).epsilon(0.05));  // inflated estimate
}

TEST_CASE("run_solve: naive solver never closes the toy gap") {
  Dataset ds = oracle::toy_duplicated_pair();
  SolverConfig cfg;
  cfg.kind = SolverKind::sdca_naive;
  cfg.lambda = 0.5;
  cfg.b = 2;
  cfg.max_iters = 50;
  cfg.checkpoint_every = 1;
  RunOptions opt;
  opt.epsilon_target = 1e-3;
  RunResult r = run_solve(ds, cfg, opt);
  CHECK_FALSE(r.reached_target);
  CHECK_FALSE(r.iterations_to_target.has_value());
  for (const auto& rec : r.trace) {
    CHECK(*rec.dual == Catch::Approx(0.0).margin(1e-14));
  }
}

TEST_CASE("trace rows satisfy gap = primal - dual >= 0") {
  Dataset ds = make_gaussian(40, 8, 0.3, 7);
  SolverConfig cfg;
  cfg.kind = SolverKind::sdca_safe;
  cfg.lambda = 0.02;
  cfg.b = 5;
  cfg.max_iters = 200;
  cfg.seed = 3;
  RunResult r = run_solve(ds, cfg);
  REQUIRE(!r.trace.empty());
  for (const auto& rec : r.trace) {
    REQUIRE(rec.dual.has_value());
    CHECK(*rec.gap == Catch::Approx(rec.primal - *rec.dual).margin(1e-15));
    CHECK(*rec.gap >= -1e-9);
  }
}

TEST_CASE("repeated runs with the same seed emit identical CSV bodies") {
  Dataset ds = make_gaussian(30, 6, 0.25, 11);
  SolverConfig cfg;
  cfg.kind = SolverKind::sdca_aggressive;
  cfg.lambda = 0.01;
  cfg.b = 4;
  cfg.max_iters = 120;
  cfg.seed = 42;
  RunOptions opt;
  opt.sigma_override = 0.25;
  const std::string a = run_csv(run_solve(ds, cfg, opt), cfg);
  const std::string b = run_csv(run_solve(ds, cfg, opt), cfg);
  CHECK(csv_body(a) == csv_body(b));
  CHECK(csv_body(a).find("nan") == std::string::npos);
}

TEST_CASE("csv layout") {
  CHECK(std::string(trace_csv_columns()) ==
        "iter,epoch_equiv,primal,dual,gap,test_error,beta_t");
  TraceRecord rec;
  rec.iter = 3;
  rec.epoch_equiv = 1.5;
  rec.primal = 0.25;
  CHECK(trace_csv_row(rec) == "3,1.5,0.25,,,,");  // absent fields stay empty
}

TEST_CASE("pegasos run reports primal-only rows and a test error") {
  Dataset ds = make_gaussian(50, 8, 0.3, 23);
  auto [train, test] = split(ds, 0.2, 5);
  SolverConfig cfg;
  cfg.kind = SolverKind::pegasos;
  cfg.lambda = 0.02;
  cfg.b = 5;
  cfg.max_iters = 200;
  cfg.averaging = Averaging::tail;
  RunOptions opt;
  opt.test_ds = &test;
  RunResult r = run_solve(train, cfg, opt);
  CHECK(std::isnan(r.final_report.gap));
  REQUIRE(r.final_report.test_error.has_value());
  CHECK(*r.final_report.test_error >= 0.0);
  CHECK(*r.final_report.test_error <= 1.0);
  for (const auto& rec : r.trace) CHECK_FALSE(rec.dual.has_value());
}

TEST_CASE("reference_primal_optimum certifies the toy optimum") {
  Dataset ds = oracle::toy_duplicated_pair();
  CHECK(reference_primal_optimum(ds, 0.5, 1e-9) ==
        Catch::Approx(0.25).margin(1e-8));
}

TEST_CASE("synthetic generators hit their spectral targets") {
  Dataset orth = make_orthogonal(4, 4);
  CHECK(orth.n() == 4);
  CHECK(spectral_norm_sq(orth, 1e-10, 5000, 1.0).sigma_sq ==
        Catch::Approx(0.25).epsilon(1e-6));

  Dataset dup = make_duplicated(2);
  CHECK(dup.n() == 2);
  CHECK(dup.examples[0].values == dup.examples[1].values);
  CHECK(spectral_norm_sq(dup, 1e-10, 5000, 1.0).sigma_sq ==
        Catch::Approx(1.0).epsilon(1e-9));

  for (double target : {0.1, 0.3, 0.6}) {
    Dataset g = make_gaussian(80, 20, target, 91);
    const double got = spectral_norm_sq(g, 1e-9, 10000, 1.0).sigma_sq;
    CHECK(got == Catch::Approx(target).epsilon(0.10));
    for (const auto& ex : g.examples) {
      CHECK(ex.sq_norm == Catch::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("run_sweep on a small orthogonal problem") {
  Dataset ds = make_orthogonal(16, 16);
  SolverConfig base;
  base.lambda = 0.05;
  base.max_iters = 20000;
  base.seed = 9;
  RunOptions opt;
  opt.epsilon_target = 1e-3;
  opt.sigma_override = 1.0 / 16;

  CHECK_THROWS_AS(
      run_sweep(ds, {SolverKind::sdca_safe}, {}, base, opt),
      std::invalid_argument);

  auto rows = run_sweep(ds, {SolverKind::sdca_safe, SolverKind::sdca_serial},
                        {1, 4}, base, opt);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    CHECK(row.beta_b == Catch::Approx(1.0));  // orthogonal: beta_b = 1
    CHECK(row.beta_b_over_b == Catch::Approx(1.0 / row.b));
    CHECK(row.iters_to_gap_target.has_value());
  }
  // larger batches touch coordinates faster
  CHECK(*rows[1].iters_to_gap_target < *rows[0].iters_to_gap_target);

  const std::string csv = sweep_csv(rows, 1e-3);
  CHECK(csv.find("sdca_safe,4,") != std::string::npos);
  CHECK(csv.find("not_reached") == std::string::npos);
}

TEST_CASE("lambda presets") {
  const auto& p = lambda_presets();
  CHECK(p.at("cov") == 1e-5);
  CHECK(p.at("rcv1") == 1e-4);
  CHECK(p.at("astro-ph") == 5e-5);
  CHECK(p.at("news20") == 1.25e-4);
}
