#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "potd/parallel.hpp"
#include "potd/rng.hpp"

using namespace potd;

TEST_CASE("the engine is the standard mt19937_64") {
  // The standard fixes the 10000th output of a default-seeded engine.
  Rng rng(5489);
  std::uint64_t value = 0;
  for (int i = 0; i < 10000; ++i) value = rng.next_u64();
  CHECK(value == 9981545732273789042ULL);
}

TEST_CASE("draws are deterministic and in range") {
  Rng a(11);
  Rng b(11);
  double sum = 0.0;
  double sum_sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = a.uniform01();
    CHECK(u == b.uniform01());
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double x = a.normal();
    CHECK(x == b.normal());
    sum += x;
    sum_sq += x * x;
    const auto k = a.below(7);
    CHECK(k == b.below(7));
    REQUIRE(k < 7);
    const double w = a.uniform(-2.0, 2.0);
    CHECK(w == b.uniform(-2.0, 2.0));
    REQUIRE(w >= -2.0);
    REQUIRE(w < 2.0);
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sum_sq / n - 1.0) < 0.02);
}

TEST_CASE("mix_seed separates streams") {
  CHECK(mix_seed(42, 0) == mix_seed(42, 0));
  CHECK(mix_seed(42, 0) != mix_seed(42, 1));
  CHECK(mix_seed(42, 0) != mix_seed(43, 0));
}

TEST_CASE("parallel_for runs every index once") {
  setenv("POTD_NUM_THREADS", "4", 1);
  CHECK(worker_count() == 4);
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  parallel_for(0, [](std::size_t) { FAIL("no indices expected"); });
  unsetenv("POTD_NUM_THREADS");
}

TEST_CASE("parallel_for rethrows the lowest failing index") {
  for (const char* threads : {"1", "8"}) {
    setenv("POTD_NUM_THREADS", threads, 1);
    std::atomic<int> ran{0};
    try {
      parallel_for(100, [&](std::size_t i) {
        ++ran;
        if (i == 17 || i == 90) throw std::runtime_error("index " + std::to_string(i));
      });
      FAIL("expected an exception");
    } catch (const std::runtime_error& error) {
      CHECK(std::string(error.what()) == "index 17");
    }
    CHECK(ran.load() == 100);
  }
  unsetenv("POTD_NUM_THREADS");
}

TEST_CASE("worker_count falls back on bad values") {
  setenv("POTD_NUM_THREADS", "zero", 1);
  CHECK(worker_count() >= 1);
  setenv("POTD_NUM_THREADS", "-3", 1);
  CHECK(worker_count() >= 1);
  unsetenv("POTD_NUM_THREADS");
}
