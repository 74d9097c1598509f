#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "minisvm/dataset.hpp"
#include "minisvm/linalg.hpp"
#include "minisvm/sampler.hpp"

namespace minisvm {

inline double hinge(double z) { return std::max(0.0, 1.0 - z); }

inline double clip_interval(double v, double lo, double hi) {
  return std::min(hi, std::max(lo, v));
}

// Dual variables with box feasibility 0 <= alpha_i <= 1 and a cached
// l1 sum (for the hinge loss the l1 norm is just the sum).
struct DualVector {
  std::vector<double> alpha;
  double l1_sum = 0.0;

  explicit DualVector(std::size_t n = 0) : alpha(n, 0.0) {}

  void add(std::size_t i, double delta) {
    alpha[i] += delta;
    l1_sum += delta;
  }

  bool feasible(double tol = 1e-9) const {
    for (double a : alpha) {
      if (a < -tol || a > 1.0 + tol) return false;
    }
    return true;
  }

  void recompute_l1() {
    double s = 0.0;
    for (double a : alpha) s += a;
    l1_sum = s;
  }
};

struct GapReport {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  std::optional<double> test_error;
};

// P(w) = (1/n) sum hinge(y_i <w, x_i>) + (lambda/2) ||w||^2.
inline double primal_objective(const Dataset& ds, const DenseVector& w,
                               double lambda) {
  if (lambda <= 0.0) throw std::domain_error("lambda must be positive");
  double loss = 0.0;
  for (const auto& ex : ds.examples) loss += hinge(ex.label * dot(ex, w));
  return loss / static_cast<double>(ds.n()) + 0.5 * lambda * sq_norm(w);
}

// D(alpha) evaluated through the maintained primal image w(alpha):
// (1/n) sum alpha_i - (lambda/2) ||w(alpha)||^2, which equals the
// explicit -alpha^T Q alpha / (2 lambda n^2) + (1/n) sum alpha_i form.
inline double dual_objective(const Dataset& ds, const DualVector& a,
                             const DenseVector& w_of_alpha, double lambda) {
  if (a.alpha.size() != ds.n()) {
    throw std::invalid_argument("dual_objective: size mismatch");
  }
  if (!a.feasible()) throw std::domain_error("dual_objective: infeasible alpha");
  return a.l1_sum / static_cast<double>(ds.n()) -
         0.5 * lambda * sq_norm(w_of_alpha);
}

// Misclassification fraction; a zero decision value counts as an error.
inline double test_error(const Dataset& ds, const DenseVector& w) {
  std::size_t errors = 0;
  for (const auto& ex : ds.examples) {
    if (ex.label * dot(ex, w) <= 0.0) ++errors;
  }
  return static_cast<double>(errors) / static_cast<double>(ds.n());
}

inline GapReport duality_gap(const Dataset& ds, const DualVector& a,
                             const DenseVector& w_of_alpha, double lambda,
                             const Dataset* test_ds = nullptr) {
  GapReport r;
  r.primal = primal_objective(ds, w_of_alpha, lambda);
  r.dual = dual_objective(ds, a, w_of_alpha, lambda);
  r.gap = r.primal - r.dual;
  if (test_ds != nullptr) r.test_error = test_error(*test_ds, w_of_alpha);
  return r;
}

// (1/b) sum_{i in A} hinge(y_i <w, x_i>).
inline double minibatch_loss(const Dataset& ds, const MiniBatch& batch,
                             const DenseVector& w) {
  if (batch.indices.empty()) throw std::domain_error("empty mini-batch");
  double loss = 0.0;
  for (int i : batch.indices) {
    const auto& ex = ds.examples[static_cast<std::size_t>(i)];
    loss += hinge(ex.label * dot(ex, w));
  }
  return loss / static_cast<double>(batch.indices.size());
}

// w(alpha) = (1/(lambda n)) sum alpha_i y_i x_i recomputed from scratch;
// oracle for the incrementally maintained iterate.
inline DenseVector recompute_w(const Dataset& ds, const DualVector& a,
                               double lambda) {
  DenseVector w(static_cast<std::size_t>(ds.dim), 0.0);
  const double inv = 1.0 / (lambda * static_cast<double>(ds.n()));
  for (std::size_t i = 0; i < ds.n(); ++i) {
    const auto& ex = ds.examples[i];
    axpy(inv * a.alpha[i] * ex.label, ex, w);
  }
  return w;
}

}  // namespace minisvm
