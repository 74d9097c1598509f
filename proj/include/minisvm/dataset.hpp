#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "minisvm/rng.hpp"

namespace minisvm {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One labeled training point. Indices are 0-based, strictly increasing,
// values nonzero and finite. sq_norm caches the squared Euclidean norm.
struct SparseExample {
  std::vector<int> indices;
  std::vector<double> values;
  double label = 1.0;  // +1 or -1
  double sq_norm = 0.0;

  void recompute_sq_norm() {
    double s = 0.0;
    for (double v : values) s += v * v;
    sq_norm = s;
  }

  std::size_t nnz() const { return indices.size(); }
};

// Immutable collection of sparse examples. scale_factor records the
// global divisor applied by normalize(); max_norm is max_i ||x_i||.
struct Dataset {
  std::vector<SparseExample> examples;
  int dim = 0;
  double scale_factor = 1.0;
  double max_norm = 0.0;

  std::size_t n() const { return examples.size(); }

  void recompute_metadata() {
    int max_idx = -1;
    double max_sq = 0.0;
    for (auto& ex : examples) {
      if (!ex.indices.empty()) max_idx = std::max(max_idx, ex.indices.back());
      max_sq = std::max(max_sq, ex.sq_norm);
    }
    dim = std::max(dim, max_idx + 1);
    if (dim < 1) dim = 1;
    max_norm = std::sqrt(max_sq);
  }
};

namespace detail {

inline bool parse_double(const std::string& tok, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(tok, &pos);
    return pos == tok.size();
  } catch (...) {
    return false;
  }
}

}  // namespace detail

// Parses LIBSVM/SVMlight text: "<label> <idx>:<val> ...", 1-based indices
// on disk, '#' starts a comment. Labels are thresholded at 0 (label > 0
// maps to +1, label < 0 to -1; exactly 0 is rejected). Explicit zero
// values are dropped.
inline Dataset parse_libsvm(std::istream& in) {
  Dataset ds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank line

    SparseExample ex;
    double raw_label;
    if (!detail::parse_double(tok, raw_label)) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": bad label token '" + tok + "'");
    }
    if (raw_label == 0.0) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": label must be nonzero");
    }
    ex.label = raw_label > 0.0 ? 1.0 : -1.0;

    int prev_idx = -1;
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos || colon == 0 ||
          colon + 1 == tok.size()) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": bad feature token '" + tok + "'");
      }
      double idx_d, val;
      if (!detail::parse_double(tok.substr(0, colon), idx_d) ||
          idx_d != std::floor(idx_d) || idx_d < 1) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": bad feature index in '" + tok + "'");
      }
      if (!detail::parse_double(tok.substr(colon + 1), val) ||
          !std::isfinite(val)) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": bad feature value in '" + tok + "'");
      }
      const int idx = static_cast<int>(idx_d) - 1;  // 1-based on disk
      if (idx <= prev_idx) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": non-increasing feature index " +
                         std::to_string(idx + 1));
      }
      prev_idx = idx;
      if (val == 0.0) continue;
      ex.indices.push_back(idx);
      ex.values.push_back(val);
    }
    ex.recompute_sq_norm();
    ds.examples.push_back(std::move(ex));
  }
  if (ds.examples.empty()) throw ParseError("no examples");
  ds.recompute_metadata();
  return ds;
}

inline Dataset parse_libsvm_string(const std::string& text) {
  std::istringstream in(text);
  return parse_libsvm(in);
}

// Writes the dataset back to LIBSVM text (1-based indices).
inline void write_libsvm(const Dataset& ds, std::ostream& out) {
  out.precision(17);
  for (const auto& ex : ds.examples) {
    out << (ex.label > 0 ? "+1" : "-1");
    for (std::size_t k = 0; k < ex.indices.size(); ++k) {
      out << ' ' << (ex.indices[k] + 1) << ':' << ex.values[k];
    }
    out << '\n';
  }
}

// Divides every example by the global max norm M = max_i ||x_i||, so that
// post-normalization max_norm = 1. Uniform scaling preserves the relative
// geometry (and hence the ratio n*sigma^2). Idempotent: if M is already 1
// within 1e-9 the data is returned unchanged with scale_factor = 1.
inline Dataset normalize(const Dataset& ds) {
  if (ds.n() == 0) throw std::invalid_argument("empty dataset");
  double max_sq = 0.0;
  for (const auto& ex : ds.examples) max_sq = std::max(max_sq, ex.sq_norm);
  if (max_sq == 0.0) throw std::invalid_argument("degenerate data");
  const double m = std::sqrt(max_sq);
  Dataset out = ds;
  if (std::abs(m - 1.0) <= 1e-9) {
    out.scale_factor = 1.0;
    out.max_norm = m;
    return out;
  }
  for (auto& ex : out.examples) {
    for (auto& v : ex.values) v /= m;
    ex.recompute_sq_norm();
  }
  out.scale_factor = m;
  out.recompute_metadata();
  return out;
}

// Seeded shuffle-then-partition split; |test| = floor(fraction * n).
inline std::pair<Dataset, Dataset> split(const Dataset& ds,
                                         double test_fraction,
                                         std::uint64_t seed) {
  if (test_fraction < 0.0 || test_fraction >= 1.0) {
    throw std::domain_error("test_fraction must be in [0,1)");
  }
  if (test_fraction > 0.0 && ds.n() < 2) {
    throw std::domain_error("need n >= 2 to split");
  }
  std::vector<std::size_t> order(ds.n());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = ds.n(); i > 1; --i) {  // Fisher-Yates
    std::swap(order[i - 1], order[rng.below(i)]);
  }
  const std::size_t n_test =
      static_cast<std::size_t>(std::floor(test_fraction * ds.n()));
  Dataset train, test;
  train.scale_factor = test.scale_factor = ds.scale_factor;
  train.dim = test.dim = ds.dim;
  for (std::size_t k = 0; k < ds.n(); ++k) {
    auto& dst = k < n_test ? test : train;
    dst.examples.push_back(ds.examples[order[k]]);
  }
  train.recompute_metadata();
  test.recompute_metadata();
  train.dim = test.dim = ds.dim;
  return {std::move(train), std::move(test)};
}

}  // namespace minisvm
