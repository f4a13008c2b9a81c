#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "bandjoin/rng.hpp"

using namespace bandjoin;

TEST_CASE("Rng: deterministic per seed") {
  Rng a(42), b(42), c(43);
  bool diverged = false;
  for (int i = 0; i < 100; ++i) {
    uint64_t x = a.next_u64();
    CHECK_EQ(x, b.next_u64());
    diverged = diverged || x != c.next_u64();
  }
  CHECK(diverged);
}

TEST_CASE("Rng: next_below range and rough uniformity") {
  Rng rng(1);
  std::vector<int> counts(10, 0);
  for (int i = 0; i < 100000; ++i) {
    uint64_t x = rng.next_below(10);
    REQUIRE(x < 10);
    ++counts[x];
  }
  for (int c : counts) {
    CHECK(c > 9000);
    CHECK(c < 11000);
  }
  CHECK_THROWS_AS(rng.next_below(0), std::invalid_argument);
}

TEST_CASE("Rng: next_double in [0, 1)") {
  Rng rng(5);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    double x = rng.next_double();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    sum += x;
  }
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("sample_without_replacement: distinct, in-range, deterministic") {
  Rng rng(9);
  auto got = sample_without_replacement(1000, 100, rng);
  CHECK_EQ(got.size(), 100);
  std::set<size_t> uniq(got.begin(), got.end());
  CHECK_EQ(uniq.size(), 100);
  for (size_t i : got) CHECK(i < 1000);

  Rng rng2(9);
  CHECK_EQ(got, sample_without_replacement(1000, 100, rng2));
}

TEST_CASE("sample_without_replacement: k = n is a permutation, k > n rejected") {
  Rng rng(3);
  auto got = sample_without_replacement(50, 50, rng);
  std::sort(got.begin(), got.end());
  for (size_t i = 0; i < 50; ++i) CHECK_EQ(got[i], i);
  CHECK_THROWS_AS(sample_without_replacement(10, 11, rng),
                  std::invalid_argument);
}

TEST_CASE("hash_mix: stateless and roughly uniform mod small ranges") {
  CHECK_EQ(hash_mix(1, 2, 3, 4), hash_mix(1, 2, 3, 4));
  CHECK_NE(hash_mix(1, 2, 3, 4), hash_mix(2, 2, 3, 4));
  std::vector<int> counts(5, 0);
  for (uint64_t id = 0; id < 50000; ++id)
    ++counts[hash_mix(id, 7, 11, 0x5) % 5];
  for (int c : counts) {
    CHECK(c > 9000);
    CHECK(c < 11000);
  }
}
