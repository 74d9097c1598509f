#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "minisvm/rng.hpp"

namespace minisvm {

// A uniformly random b-subset of {0,...,n-1}, stored sorted ascending.
struct MiniBatch {
  std::vector<int> indices;

  int b() const { return static_cast<int>(indices.size()); }
};

// Draws uniform b-subsets. Keeps a persistent index pool so a draw costs
// O(b) (partial Fisher-Yates, swaps undone afterwards); for b > n/2 the
// complement of an (n-b)-subset is returned instead.
class BatchSampler {
 public:
  explicit BatchSampler(int n) : n_(n), pool_(static_cast<std::size_t>(n)) {
    if (n < 1) throw std::domain_error("BatchSampler: n must be >= 1");
    std::iota(pool_.begin(), pool_.end(), 0);
  }

  MiniBatch draw(int b, Rng& rng) {
    if (b < 1 || b > n_) throw std::domain_error("draw: need 1 <= b <= n");
    MiniBatch out;
    if (b == n_) {
      out.indices.resize(static_cast<std::size_t>(n_));
      std::iota(out.indices.begin(), out.indices.end(), 0);
      return out;
    }
    if (2 * b <= n_) {
      out.indices = prefix_sample(b, rng);
    } else {
      const auto excluded = prefix_sample(n_ - b, rng);
      std::vector<char> mask(static_cast<std::size_t>(n_), 0);
      for (int i : excluded) mask[static_cast<std::size_t>(i)] = 1;
      out.indices.reserve(static_cast<std::size_t>(b));
      for (int i = 0; i < n_; ++i) {
        if (!mask[static_cast<std::size_t>(i)]) out.indices.push_back(i);
      }
      return out;  // already sorted
    }
    std::sort(out.indices.begin(), out.indices.end());
    return out;
  }

 private:
  std::vector<int> prefix_sample(int k, Rng& rng) {
    swaps_.clear();
    for (int j = 0; j < k; ++j) {
      const int other =
          j + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_ - j)));
      swaps_.emplace_back(j, other);
      std::swap(pool_[static_cast<std::size_t>(j)],
                pool_[static_cast<std::size_t>(other)]);
    }
    std::vector<int> picked(pool_.begin(), pool_.begin() + k);
    for (auto it = swaps_.rbegin(); it != swaps_.rend(); ++it) {
      std::swap(pool_[static_cast<std::size_t>(it->first)],
                pool_[static_cast<std::size_t>(it->second)]);
    }
    return picked;
  }

  int n_;
  std::vector<int> pool_;
  std::vector<std::pair<int, int>> swaps_;
};

inline MiniBatch draw(int n, int b, Rng& rng) {
  return BatchSampler(n).draw(b, rng);
}

}  // namespace minisvm
