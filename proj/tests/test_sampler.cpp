#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "minisvm/sampler.hpp"

using namespace minisvm;

TEST_CASE("draw validates b") {
  Rng rng(1);
  CHECK_THROWS_AS(draw(5, 0, rng), std::domain_error);
  CHECK_THROWS_AS(draw(5, 6, rng), std::domain_error);
}

TEST_CASE("b = n returns the full index set") {
  Rng rng(1);
  for (int rep = 0; rep < 5; ++rep) {
    MiniBatch mb = draw(7, 7, rng);
    REQUIRE(mb.b() == 7);
    for (int i = 0; i < 7; ++i) CHECK(mb.indices[i] == i);
  }
}

TEST_CASE("batches are sorted distinct subsets") {
  Rng rng(9);
  BatchSampler sampler(20);
  for (int rep = 0; rep < 200; ++rep) {
    const int b = 1 + static_cast<int>(rng.below(20));
    MiniBatch mb = sampler.draw(b, rng);
    REQUIRE(mb.b() == b);
    for (int k = 1; k < b; ++k) CHECK(mb.indices[k - 1] < mb.indices[k]);
    CHECK(mb.indices.front() >= 0);
    CHECK(mb.indices.back() < 20);
  }
}

TEST_CASE("determinism: same seed, same sequence") {
  Rng a(77), b(77);
  BatchSampler sa(31), sb(31);
  for (int rep = 0; rep < 100; ++rep) {
    CHECK(sa.draw(5, a).indices == sb.draw(5, b).indices);
  }
}

TEST_CASE("b=1 over n=2 is a fair coin") {
  Rng rng(123);
  BatchSampler sampler(2);
  int zeros = 0;
  const int draws = 10000;
  for (int rep = 0; rep < draws; ++rep) {
    if (sampler.draw(1, rng).indices[0] == 0) ++zeros;
  }
  CHECK(std::abs(zeros / static_cast<double>(draws) - 0.5) < 0.02);
}

TEST_CASE("all 10 pairs of {0..4} are equally likely") {
  Rng rng(321);
  BatchSampler sampler(5);
  std::map<std::pair<int, int>, int> counts;
  const int draws = 100000;
  for (int rep = 0; rep < draws; ++rep) {
    MiniBatch mb = sampler.draw(2, rng);
    ++counts[{mb.indices[0], mb.indices[1]}];
  }
  REQUIRE(counts.size() == 10);
  for (const auto& [pair, c] : counts) {
    CHECK(std::abs(c / static_cast<double>(draws) - 0.1) < 0.01);
  }
}

TEST_CASE("marginal inclusion probability is b/n") {
  // also exercises the complement path (b > n/2)
  Rng rng(55);
  const int n = 9;
  BatchSampler sampler(n);
  for (int b : {2, 3, 6, 8}) {
    std::vector<int> hits(n, 0);
    const int draws = 40000;
    for (int rep = 0; rep < draws; ++rep) {
      for (int i : sampler.draw(b, rng).indices) ++hits[i];
    }
    const double p = static_cast<double>(b) / n;
    const double se = std::sqrt(p * (1.0 - p) / draws);
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(hits[i] / static_cast<double>(draws) - p) <= 3.5 * se);
    }
  }
}

TEST_CASE("derived seeds differ per stream") {
  CHECK(derive_seed(0, 0) != derive_seed(0, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}
