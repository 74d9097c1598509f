#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "minisvm/dataset.hpp"
#include "minisvm/linalg.hpp"
#include "minisvm/objectives.hpp"
#include "minisvm/sampler.hpp"

namespace minisvm {

enum class SolverKind {
  pegasos,
  sdca_naive,
  sdca_safe,
  sdca_aggressive,
  sdca_serial,
};

enum class Averaging { tail, decaying, final_iterate, schedule };

inline const char* to_string(SolverKind k) {
  switch (k) {
    case SolverKind::pegasos: return "pegasos";
    case SolverKind::sdca_naive: return "sdca_naive";
    case SolverKind::sdca_safe: return "sdca_safe";
    case SolverKind::sdca_aggressive: return "sdca_aggressive";
    case SolverKind::sdca_serial: return "sdca_serial";
  }
  return "?";
}

inline const char* to_string(Averaging a) {
  switch (a) {
    case Averaging::tail: return "tail";
    case Averaging::decaying: return "decaying";
    case Averaging::final_iterate: return "final";
    case Averaging::schedule: return "schedule";
  }
  return "?";
}

inline SolverKind solver_kind_from_string(const std::string& s) {
  if (s == "pegasos") return SolverKind::pegasos;
  if (s == "sdca_naive") return SolverKind::sdca_naive;
  if (s == "sdca_safe") return SolverKind::sdca_safe;
  if (s == "sdca_aggressive") return SolverKind::sdca_aggressive;
  if (s == "sdca_serial") return SolverKind::sdca_serial;
  throw std::invalid_argument("unknown solver '" + s + "'");
}

inline Averaging averaging_from_string(const std::string& s) {
  if (s == "tail") return Averaging::tail;
  if (s == "decaying") return Averaging::decaying;
  if (s == "final") return Averaging::final_iterate;
  if (s == "schedule") return Averaging::schedule;
  throw std::invalid_argument("unknown averaging mode '" + s + "'");
}

struct SolverConfig {
  SolverKind kind = SolverKind::sdca_safe;
  double lambda = 1e-3;
  int b = 1;
  long max_iters = 1000;
  std::optional<double> beta_override;
  double gamma = 0.95;          // aggressive step-size adaptation rate
  Averaging averaging = Averaging::final_iterate;
  std::uint64_t seed = 0;
  long checkpoint_every = 0;    // 0 -> ceil(n/b), roughly one epoch
  long schedule_T0 = 0;         // start of the schedule averaging window
};

// Iteration schedule for the averaged dual iterate: the smallest
// integers satisfying
//   t0 >= max{0, ceil((n/b) log(2 lambda n / beta_b))}
//   T0 >= t0 + (beta_b/b) [4/(lambda eps) - 2n/beta_b]_+
//   T  >= T0 + max{ceil(n/b), (beta_b/b)/(lambda eps)}.
struct Schedule {
  long t0 = 0;
  long T0 = 0;
  long T = 0;
  double epsilon = 0.0;
};

inline Schedule compute_schedule(int n, int b, double lambda, double epsilon,
                                 double beta_b_val) {
  if (n < 1 || b < 1 || b > n || lambda <= 0.0 || epsilon <= 0.0 ||
      beta_b_val < 1.0) {
    throw std::domain_error("compute_schedule: invalid parameters");
  }
  Schedule s;
  s.epsilon = epsilon;
  const double nb = static_cast<double>(n) / b;
  const double log_arg = 2.0 * lambda * n / beta_b_val;
  s.t0 = std::max<long>(
      0, static_cast<long>(std::ceil(nb * std::log(log_arg))));
  const double bracket =
      std::max(0.0, 4.0 / (lambda * epsilon) - 2.0 * n / beta_b_val);
  s.T0 = s.t0 + static_cast<long>(std::ceil(beta_b_val / b * bracket));
  s.T = s.T0 + std::max<long>(
                   static_cast<long>(std::ceil(nb)),
                   static_cast<long>(
                       std::ceil(beta_b_val / b / (lambda * epsilon))));
  return s;
}

// Coordinate update: clip_[-alpha_i, 1-alpha_i] of
// lambda n (1 - margin) / denom. The serial solver passes denom =
// ||x_i||^2, the mini-batch variants a separable bound beta. A zero
// denominator (zero-norm example) makes the objective linear in delta,
// so the optimal move is the sign-appropriate box extreme.
inline double sdca_coordinate_delta(double alpha_i, double margin,
                                    double lambda_n, double denom) {
  const double numer = lambda_n * (1.0 - margin);
  if (denom <= 0.0) {
    return numer > 0.0 ? 1.0 - alpha_i : -alpha_i;
  }
  return clip_interval(numer / denom, -alpha_i, 1.0 - alpha_i);
}

class Solver {
 public:
  Solver(const Dataset& ds, const SolverConfig& cfg, double sigma_sq)
      : ds_(ds),
        cfg_(cfg),
        n_(static_cast<int>(ds.n())),
        lambda_n_(cfg.lambda * static_cast<double>(ds.n())),
        w_(static_cast<std::size_t>(ds.dim), 0.0),
        alpha_(ds.n()),
        scratch_(static_cast<std::size_t>(ds.dim), 0.0),
        w_avg_(static_cast<std::size_t>(ds.dim), 0.0),
        alpha_avg_sum_(ds.n(), 0.0) {
    if (cfg.b < 1 || cfg.b > n_) throw std::domain_error("b out of range");
    if (cfg.lambda <= 0.0) throw std::domain_error("lambda must be positive");
    if (cfg.gamma <= 0.0 || cfg.gamma >= 1.0) {
      throw std::domain_error("gamma must be in (0,1)");
    }
    if (cfg.kind == SolverKind::sdca_serial && cfg.b != 1) {
      throw std::domain_error("serial SDCA requires b = 1");
    }
    beta_b_ = cfg.beta_override ? *cfg.beta_override
                                : beta_b(n_, cfg.b, sigma_sq);
    beta_t_ = beta_b_;
    if (cfg.kind == SolverKind::pegasos) t_ = 1;
    if (cfg.averaging == Averaging::schedule && cfg.schedule_T0 == 0 &&
        cfg.kind != SolverKind::pegasos) {
      alpha_avg_count_ = 1;  // accounts for alpha^(0) = 0
    }
  }

  // State accessors.
  const DenseVector& w() const { return w_; }
  const DualVector& alpha() const { return alpha_; }
  long t() const { return t_; }
  double beta_t() const { return beta_t_; }
  double beta_b_value() const { return beta_b_; }
  long rejected_steps() const { return rejected_steps_; }
  bool is_dual() const { return cfg_.kind != SolverKind::pegasos; }

  // One iteration on the given mini-batch, dispatched by solver kind.
  void step(const MiniBatch& batch) {
    switch (cfg_.kind) {
      case SolverKind::pegasos: pegasos_step(batch); break;
      case SolverKind::sdca_naive:
      case SolverKind::sdca_serial: sdca_naive_step(batch); break;
      case SolverKind::sdca_safe: sdca_safe_step(batch); break;
      case SolverKind::sdca_aggressive: sdca_aggressive_step(batch); break;
    }
    update_average();
  }

  // w^(t+1) = (1 - eta_t lambda) w^(t) + (eta_t / b) sum_{i in A+} y_i x_i
  // with eta_t = 1/(lambda t); margins use the pre-update iterate.
  void pegasos_step(const MiniBatch& batch) {
    const double eta = 1.0 / (cfg_.lambda * static_cast<double>(t_));
    std::vector<int> violators;
    violators.reserve(batch.indices.size());
    for (int i : batch.indices) {
      const auto& ex = ds_.examples[static_cast<std::size_t>(i)];
      if (ex.label * dot(ex, w_) < 1.0) violators.push_back(i);
    }
    const double shrink = 1.0 - eta * cfg_.lambda;
    for (auto& c : w_) c *= shrink;
    const double scale = eta / static_cast<double>(batch.indices.size());
    for (int i : violators) {
      const auto& ex = ds_.examples[static_cast<std::size_t>(i)];
      axpy(scale * ex.label, ex, w_);
    }
    ++t_;
  }

  // Per-coordinate full steps (denominator ||x_i||^2) computed against a
  // common pre-update iterate, then applied jointly. Not monotone in D.
  void sdca_naive_step(const MiniBatch& batch) {
    joint_update(batch, [this](const SparseExample& ex) {
      return ex.sq_norm;
    });
    ++t_;
  }

  // Same, with the safe separable denominator beta_b.
  void sdca_safe_step(const MiniBatch& batch) {
    joint_update(batch, [this](const SparseExample&) { return beta_b_; });
    ++t_;
  }

  // Adaptive variant: tentative step with the current beta, step-size
  // ratio rho from the realized quadratic, recomputed step with rho,
  // geometric beta adaptation, and rejection of non-improving steps.
  void sdca_aggressive_step(const MiniBatch& batch) {
    const std::size_t b = batch.indices.size();
    std::vector<double> margins(b);
    for (std::size_t k = 0; k < b; ++k) {
      const auto& ex = ds_.examples[static_cast<std::size_t>(batch.indices[k])];
      margins[k] = ex.label * dot(ex, w_);
    }
    double zeta = 0.0;
    std::fill(scratch_.begin(), scratch_.end(), 0.0);
    for (std::size_t k = 0; k < b; ++k) {
      const std::size_t i = static_cast<std::size_t>(batch.indices[k]);
      const double d = sdca_coordinate_delta(alpha_.alpha[i], margins[k],
                                             lambda_n_, beta_t_);
      zeta += d * d;
      axpy(d * ds_.examples[i].label, ds_.examples[i], scratch_);
    }
    if (zeta == 0.0) {  // degenerate tentative step: no-op, beta unchanged
      ++t_;
      return;
    }
    const double rho =
        clip_interval(sq_norm(scratch_) / zeta, 1.0, beta_b_);

    std::vector<double> deltas(b);
    std::fill(scratch_.begin(), scratch_.end(), 0.0);
    double delta_sum = 0.0;
    for (std::size_t k = 0; k < b; ++k) {
      const std::size_t i = static_cast<std::size_t>(batch.indices[k]);
      deltas[k] = sdca_coordinate_delta(alpha_.alpha[i], margins[k],
                                        lambda_n_, rho);
      delta_sum += deltas[k];
      axpy(deltas[k] * ds_.examples[i].label, ds_.examples[i], scratch_);
    }
    beta_t_ = std::pow(beta_t_, cfg_.gamma) * std::pow(rho, 1.0 - cfg_.gamma);

    // Incremental dual change for the acceptance test:
    // dD = (1/n) sum delta - <w, u>/n - ||u||^2 / (2 lambda n^2),
    // with u = sum delta_i y_i x_i.
    const double dD = delta_sum / n_ - dot_dense(w_, scratch_) / n_ -
                      sq_norm(scratch_) / (2.0 * cfg_.lambda * n_ *
                                           static_cast<double>(n_));
    if (dD > 0.0) {
      for (std::size_t k = 0; k < b; ++k) {
        alpha_.add(static_cast<std::size_t>(batch.indices[k]), deltas[k]);
      }
      const double inv = 1.0 / lambda_n_;
      for (std::size_t c = 0; c < w_.size(); ++c) w_[c] += inv * scratch_[c];
    } else {
      ++rejected_steps_;
    }
    ++t_;
  }

  // The iterate the configured averaging mode reports.
  DenseVector averaged_w() const {
    switch (cfg_.averaging) {
      case Averaging::final_iterate:
        return w_;
      case Averaging::decaying:
        return avg_started_ ? w_avg_ : w_;
      case Averaging::tail: {
        if (tail_count_ == 0) return w_;
        DenseVector out = w_avg_;
        for (auto& c : out) c /= static_cast<double>(tail_count_);
        return out;
      }
      case Averaging::schedule: {
        if (!is_dual() || alpha_avg_count_ == 0) return w_;
        DualVector abar(alpha_.alpha.size());
        for (std::size_t i = 0; i < abar.alpha.size(); ++i) {
          abar.alpha[i] =
              alpha_avg_sum_[i] / static_cast<double>(alpha_avg_count_);
        }
        abar.recompute_l1();
        return recompute_w(ds_, abar, cfg_.lambda);
      }
    }
    return w_;
  }

  // Dual point matching averaged_w() (dual solvers only).
  DualVector averaged_alpha() const {
    if (cfg_.averaging == Averaging::schedule && alpha_avg_count_ > 0) {
      DualVector abar(alpha_.alpha.size());
      for (std::size_t i = 0; i < abar.alpha.size(); ++i) {
        abar.alpha[i] =
            alpha_avg_sum_[i] / static_cast<double>(alpha_avg_count_);
      }
      abar.recompute_l1();
      return abar;
    }
    return alpha_;
  }

 private:
  template <typename DenomFn>
  void joint_update(const MiniBatch& batch, DenomFn denom) {
    const std::size_t b = batch.indices.size();
    std::vector<double> deltas(b);
    for (std::size_t k = 0; k < b; ++k) {  // margins against pre-update w
      const std::size_t i = static_cast<std::size_t>(batch.indices[k]);
      const auto& ex = ds_.examples[i];
      const double margin = ex.label * dot(ex, w_);
      deltas[k] = sdca_coordinate_delta(alpha_.alpha[i], margin, lambda_n_,
                                        denom(ex));
    }
    const double inv = 1.0 / lambda_n_;
    for (std::size_t k = 0; k < b; ++k) {
      const std::size_t i = static_cast<std::size_t>(batch.indices[k]);
      if (deltas[k] == 0.0) continue;
      alpha_.add(i, deltas[k]);
      axpy(inv * deltas[k] * ds_.examples[i].label, ds_.examples[i], w_);
    }
  }

  void update_average() {
    switch (cfg_.averaging) {
      case Averaging::final_iterate:
        break;
      case Averaging::decaying:
        if (!avg_started_) {
          w_avg_ = w_;
          avg_started_ = true;
        } else {
          for (std::size_t c = 0; c < w_.size(); ++c) {
            w_avg_[c] = 0.9 * w_avg_[c] + 0.1 * w_[c];
          }
        }
        break;
      case Averaging::tail: {
        // After a step, t_ is the index of the iterate just produced;
        // the tail window covers indices floor(T/2)+1 .. T.
        if (t_ > cfg_.max_iters / 2 && t_ <= cfg_.max_iters) {
          for (std::size_t c = 0; c < w_.size(); ++c) w_avg_[c] += w_[c];
          ++tail_count_;
        }
        break;
      }
      case Averaging::schedule: {
        // alpha-bar averages iterates T0 .. T-1. alpha^(0) = 0 adds
        // nothing to the sums; when T0 = 0 its count is pre-seeded in
        // the constructor.
        if (!is_dual()) break;
        if (t_ >= cfg_.schedule_T0 && t_ < cfg_.max_iters) {
          for (std::size_t i = 0; i < alpha_.alpha.size(); ++i) {
            alpha_avg_sum_[i] += alpha_.alpha[i];
          }
          ++alpha_avg_count_;
        }
        break;
      }
    }
  }

  const Dataset& ds_;
  SolverConfig cfg_;
  int n_;
  double lambda_n_;
  double beta_b_ = 1.0;

  DenseVector w_;          // maintained w(alpha) for dual solvers
  DualVector alpha_;
  DenseVector scratch_;
  double beta_t_ = 1.0;
  long t_ = 0;
  long rejected_steps_ = 0;

  DenseVector w_avg_;
  bool avg_started_ = false;
  long tail_count_ = 0;
  std::vector<double> alpha_avg_sum_;
  long alpha_avg_count_ = 0;
};

}  // namespace minisvm
