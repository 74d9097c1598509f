#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "minisvm/dataset.hpp"
#include "minisvm/linalg.hpp"
#include "minisvm/rng.hpp"

namespace minisvm {

// n distinct unit basis vectors with alternating labels; sigma^2 = 1/n.
inline Dataset make_orthogonal(int n, int d) {
  if (n < 1 || d < n) {
    throw std::domain_error("orthogonal data requires d >= n >= 1");
  }
  Dataset ds;
  ds.dim = d;
  for (int i = 0; i < n; ++i) {
    SparseExample ex;
    ex.indices = {i};
    ex.values = {1.0};
    ex.label = (i % 2 == 0) ? 1.0 : -1.0;
    ex.recompute_sq_norm();
    ds.examples.push_back(std::move(ex));
  }
  ds.recompute_metadata();
  return ds;
}

// n copies of one unit vector with identical labels; sigma^2 = 1.
// n = 2 with lambda = 1/2 is the naive-SDCA divergence toy.
inline Dataset make_duplicated(int n) {
  if (n < 1) throw std::domain_error("n must be >= 1");
  Dataset ds;
  ds.dim = 1;
  for (int i = 0; i < n; ++i) {
    SparseExample ex;
    ex.indices = {0};
    ex.values = {1.0};
    ex.label = 1.0;
    ex.recompute_sq_norm();
    ds.examples.push_back(std::move(ex));
  }
  ds.recompute_metadata();
  return ds;
}

namespace detail {

// Dense unit rows: sqrt(1-mu^2) * (random unit gaussian) + mu * e_0,
// renormalized. mu tunes the row correlation and hence sigma^2.
inline Dataset gaussian_rows(int n, int d, double mu, std::uint64_t seed) {
  Dataset ds;
  ds.dim = d;
  Rng rng(derive_seed(seed, 0));
  DenseVector label_dir(static_cast<std::size_t>(d));
  for (auto& c : label_dir) c = rng.gaussian();
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(static_cast<std::size_t>(d));
    double nn = 0.0;
    for (auto& c : row) {
      c = rng.gaussian();
      nn += c * c;
    }
    nn = std::sqrt(nn);
    const double a = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    for (auto& c : row) c = a * c / nn;
    row[0] += mu;
    nn = 0.0;
    for (double c : row) nn += c * c;
    nn = std::sqrt(nn);

    SparseExample ex;
    double margin_dir = 0.0;
    for (int j = 0; j < d; ++j) {
      const double v = row[static_cast<std::size_t>(j)] / nn;
      if (v == 0.0) continue;
      ex.indices.push_back(j);
      ex.values.push_back(v);
      margin_dir += v * label_dir[static_cast<std::size_t>(j)];
    }
    ex.label = margin_dir >= 0.0 ? 1.0 : -1.0;
    ex.recompute_sq_norm();
    ds.examples.push_back(std::move(ex));
  }
  ds.recompute_metadata();
  return ds;
}

inline double measured_sigma_sq(const Dataset& ds) {
  return spectral_norm_sq(ds, 1e-9, 20000, 1.0).sigma_sq;
}

}  // namespace detail

// Dense random unit rows with a shared component tuned by bisection so the
// measured sigma^2 lands within 10% of sigma_target.
inline Dataset make_gaussian(int n, int d, double sigma_target,
                             std::uint64_t seed) {
  if (n < 2 || d < 2) throw std::domain_error("need n >= 2 and d >= 2");
  if (sigma_target <= 0.0 || sigma_target > 1.0) {
    throw std::domain_error("sigma_target must be in (0, 1]");
  }
  double lo = 0.0, hi = 1.0;
  const double s_lo = detail::measured_sigma_sq(
      detail::gaussian_rows(n, d, lo, seed));
  if (sigma_target < s_lo * 0.9) {
    throw std::domain_error(
        "sigma_target below the uncorrelated baseline " +
        std::to_string(s_lo) + " for this (n, d)");
  }
  if (std::abs(s_lo - sigma_target) <= 0.1 * sigma_target) {
    return detail::gaussian_rows(n, d, lo, seed);
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double s = detail::measured_sigma_sq(
        detail::gaussian_rows(n, d, mid, seed));
    if (std::abs(s - sigma_target) <= 0.05 * sigma_target) {
      return detail::gaussian_rows(n, d, mid, seed);
    }
    (s < sigma_target ? lo : hi) = mid;
  }
  return detail::gaussian_rows(n, d, 0.5 * (lo + hi), seed);
}

}  // namespace minisvm
