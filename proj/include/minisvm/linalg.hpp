#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "minisvm/dataset.hpp"
#include "minisvm/rng.hpp"

namespace minisvm {

using DenseVector = std::vector<double>;

inline double dot_dense(const DenseVector& a, const DenseVector& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double sq_norm(const DenseVector& v) { return dot_dense(v, v); }

// <x, w> for a sparse example against a dense vector.
inline double dot(const SparseExample& x, const DenseVector& w) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.indices.size(); ++k) {
    const std::size_t idx = static_cast<std::size_t>(x.indices[k]);
    if (idx >= w.size()) throw std::out_of_range("dot: index out of range");
    s += x.values[k] * w[idx];
  }
  return s;
}

// w += a * x (sparse axpy).
inline void axpy(double a, const SparseExample& x, DenseVector& w) {
  for (std::size_t k = 0; k < x.indices.size(); ++k) {
    const std::size_t idx = static_cast<std::size_t>(x.indices[k]);
    if (idx >= w.size()) throw std::out_of_range("axpy: index out of range");
    w[idx] += a * x.values[k];
  }
}

struct SpectralEstimate {
  double sigma_sq = 0.0;  // inflated upper bound on (1/n)||X||^2, in [1/n, 1]
  int iterations_used = 0;
  bool converged = false;
  double inflation = 1.0;
};

inline constexpr double kSpectralTol = 1e-6;
inline constexpr int kSpectralMaxIter = 1000;
inline constexpr double kSpectralInflation = 1.02;
inline constexpr std::uint64_t kSpectralSeed = 0x5eed0001ULL;

// Power iteration on v -> X^T X v, applied as two sparse passes per step
// (Q is never materialized). Returns sigma_sq = inflation * lambda_max / n
// clamped to [1/n, 1], the admissible range for normalized data.
inline SpectralEstimate spectral_norm_sq(const Dataset& ds,
                                         double tol = kSpectralTol,
                                         int max_iter = kSpectralMaxIter,
                                         double inflation = kSpectralInflation) {
  if (ds.n() == 0) throw std::invalid_argument("empty dataset");
  if (tol <= 0.0) throw std::domain_error("tol must be positive");
  if (inflation < 1.0) throw std::domain_error("inflation must be >= 1");
  const std::size_t n = ds.n();

  // Deterministic random unit start vector.
  Rng rng(kSpectralSeed);
  DenseVector v(n);
  for (auto& c : v) c = rng.gaussian();
  double vn = std::sqrt(sq_norm(v));
  for (auto& c : v) c /= vn;

  DenseVector u(static_cast<std::size_t>(ds.dim));
  SpectralEstimate est;
  est.inflation = inflation;
  double rayleigh = 0.0, prev = -1.0;
  int it = 0;
  for (; it < max_iter; ++it) {
    std::fill(u.begin(), u.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) axpy(v[i], ds.examples[i], u);
    // v is unit, so ||Xv||^2 is the Rayleigh quotient of X^T X at v.
    rayleigh = sq_norm(u);
    DenseVector next(n);
    double nn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = dot(ds.examples[i], u);
      nn += next[i] * next[i];
    }
    nn = std::sqrt(nn);
    if (nn == 0.0) break;  // v orthogonal to the range; rayleigh is 0
    for (auto& c : next) c /= nn;
    v = std::move(next);
    if (prev >= 0.0 &&
        std::abs(rayleigh - prev) < tol * std::max(rayleigh, 1e-300)) {
      est.converged = true;
      ++it;
      break;
    }
    prev = rayleigh;
  }
  est.iterations_used = it;
  const double raw = inflation * rayleigh / static_cast<double>(n);
  est.sigma_sq = std::clamp(raw, 1.0 / static_cast<double>(n), 1.0);
  return est;
}

// beta_b = 1 + (b-1)(n sigma^2 - 1)/(n-1); lies in [1, b] for
// sigma^2 in [1/n, 1].
inline double beta_b(int n, int b, double sigma_sq) {
  if (b < 1 || b > n) throw std::domain_error("beta_b: need 1 <= b <= n");
  if (n == 1 || b == 1) return 1.0;
  const double lo = 1.0 / static_cast<double>(n);
  if (sigma_sq < lo - 1e-9 || sigma_sq > 1.0 + 1e-9) {
    throw std::domain_error("beta_b: sigma_sq outside [1/n, 1]");
  }
  const double val = 1.0 + (b - 1) * (n * sigma_sq - 1.0) / (n - 1.0);
  return std::clamp(val, 1.0, static_cast<double>(b));
}

// delta^T_[A] Q delta_[A] = || sum_i delta_i y_i x_i ||^2, computed via a
// dense scratch accumulator; Q is never formed.
inline double subset_quadratic(
    const Dataset& ds, std::span<const std::pair<int, double>> delta) {
  std::unordered_set<int> seen;
  DenseVector u(static_cast<std::size_t>(ds.dim));
  for (const auto& [i, d] : delta) {
    if (i < 0 || static_cast<std::size_t>(i) >= ds.n()) {
      throw std::out_of_range("subset_quadratic: index out of range");
    }
    if (!seen.insert(i).second) {
      throw std::invalid_argument("subset_quadratic: duplicate index");
    }
    const auto& ex = ds.examples[static_cast<std::size_t>(i)];
    axpy(d * ex.label, ex, u);
  }
  return sq_norm(u);
}

inline double subset_quadratic(const Dataset& ds,
                               const std::vector<std::pair<int, double>>& d) {
  return subset_quadratic(ds, std::span<const std::pair<int, double>>(d));
}

}  // namespace minisvm
