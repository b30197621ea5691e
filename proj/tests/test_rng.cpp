#include <doctest.h>

#include <set>
#include <stdexcept>

#include "carleson/kernels.hpp"
#include "carleson/rng.hpp"

using namespace carleson;

TEST_SUITE("rng") {

TEST_CASE("philox known-answer vector") {
  const auto out = philox4x32_10({0, 0, 0, 0}, {0, 0});
  CHECK(out[0] == 0x6627e8d5u);
  CHECK(out[1] == 0xe169c58du);
  CHECK(out[2] == 0xbc57ac4cu);
  CHECK(out[3] == 0x9b00dbd8u);
}

TEST_CASE("streams are pure functions of seed and stream") {
  CounterRng a(42, 7), b(42, 7), c(42, 8);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs = differs || x != c.next_u64();
  }
  CHECK(differs);
}

TEST_CASE("uniform stays in the open unit interval and has mean 1/2") {
  CounterRng rng(3, 0);
  double sum = 0.0;
  const int m = 200000;
  for (int i = 0; i < m; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / m == doctest::Approx(0.5).epsilon(3.0 * std::sqrt(1.0 / 12.0 / m) / 0.5));
}

TEST_CASE("normal variates have unit variance") {
  CounterRng rng(5, 1);
  double s = 0.0, s2 = 0.0;
  const int m = 200000;
  for (int i = 0; i < m; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / m) < 4.0 / std::sqrt(m));
  CHECK(std::abs(s2 / m - 1.0) < 4.0 * std::sqrt(2.0 / m));
}

TEST_CASE("derived seeds differ by label") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t l = 0; l < 1000; ++l) seen.insert(derive_seed(1, l));
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(1, 5) == derive_seed(1, 5));
}

TEST_CASE("accumulator merge matches a single pass") {
  Accumulator whole, left, right;
  CounterRng rng(9, 0);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.normal();
    whole.add(x);
    (i < 400 ? left : right).add(x);
  }
  left.merge(right);
  CHECK(left.count == whole.count);
  CHECK(left.mean == doctest::Approx(whole.mean).epsilon(1e-12));
  CHECK(left.m2 == doctest::Approx(whole.m2).epsilon(1e-12));
}

TEST_CASE("serial and parallel kernels agree bit for bit") {
  auto task = [](std::size_t i) {
    CounterRng rng(11, i);
    double s = 0.0;
    for (int k = 0; k < 100; ++k) s += rng.uniform();
    return s;
  };
  const auto a = map_indexed<double>(257, task, Exec::serial);
  const auto b = map_indexed<double>(257, task, Exec::parallel);
  CHECK(a == b);

  auto dist = [](std::size_t i, std::size_t j) {
    return std::abs(std::sin(static_cast<double>(i)) - std::sin(static_cast<double>(j)));
  };
  CHECK(min_pairwise(300, dist, Exec::serial) == min_pairwise(300, dist, Exec::parallel));

  auto match = [](std::size_t q, std::size_t t) { return (q * 31 + t * 17) % 7 == 0; };
  CHECK(count_matches(100, 200, match, Exec::serial) == count_matches(100, 200, match, Exec::parallel));
}

TEST_CASE("the lowest-index task exception is rethrown") {
  auto task = [](std::size_t i) -> int {
    if (i == 5) throw std::runtime_error("five");
    if (i == 9) throw std::logic_error("nine");
    return 0;
  };
  CHECK_THROWS_WITH(map_indexed<int>(20, task, Exec::parallel), "five");
}

}
