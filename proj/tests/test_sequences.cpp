#include <doctest.h>

#include <cmath>

#include "carleson/ball.hpp"
#include "carleson/errors.hpp"
#include "carleson/integrate.hpp"
#include "carleson/sequences.hpp"
#include "oracles.hpp"

using namespace carleson;

namespace {

PointSequence reals(const std::vector<double>& xs, Metric m = Metric::pseudohyperbolic) {
  std::vector<Point> pts;
  for (double x : xs) pts.push_back(Point::basis(1, 0, x));
  return PointSequence(pts, m);
}

/// First-fit colouring straight from the definition.
std::vector<std::size_t> first_fit(const PointSequence& G, double r) {
  std::vector<std::size_t> color(G.size());
  for (std::size_t i = 0; i < G.size(); ++i) {
    std::vector<bool> used(G.size() + 1, false);
    for (std::size_t j = 0; j < i; ++j) {
      if (G.distance(i, j) < r) used[color[j]] = true;
    }
    std::size_t c = 0;
    while (used[c]) ++c;
    color[i] = c;
  }
  return color;
}

}  // namespace

TEST_SUITE("sequences") {

TEST_CASE("separation constant") {
  CHECK(separation_constant(reals({0.0, 0.5})) == doctest::Approx(0.5));
  CHECK(separation_constant(reals({0.3, 0.3})) == 0.0);
  // Ladder m = 1..10: brute force over all pairs with the Mobius quotient.
  std::vector<double> xs;
  for (int m = 1; m <= 10; ++m) xs.push_back(1.0 - std::exp(-m));
  double best = 1.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) best = std::min(best, oracle::mobius_distance(xs[i], xs[j]));
  }
  const double sep = separation_constant(radial_ladder(1, 10));
  CHECK(sep == doctest::Approx(best).epsilon(1e-12));
  CHECK(sep == doctest::Approx(0.4627).epsilon(1e-3));
  // Tail limit (e - 1)/(e + 1).
  CHECK(separation_constant(radial_ladder(1, 20)) ==
        doctest::Approx((std::exp(1.0) - 1.0) / (std::exp(1.0) + 1.0)).epsilon(1e-6));
  CHECK_THROWS_AS(separation_constant(reals({0.1})), ParameterError);
}

TEST_CASE("sweep agrees with the pairwise minimum beyond 10^4 points") {
  const PointSequence G(sample_unit_ball(2, 12000, 5));
  CHECK(separation_constant(G) == separation_constant_bruteforce(G));
  CHECK(separation_constant(G, Exec::serial) == separation_constant(G, Exec::parallel));
}

TEST_CASE("counting in balls") {
  const auto G = reals({0.0, 0.5});
  CHECK(count_in_ball(G, Point(1), 0.6) == 2);
  CHECK(count_in_ball(G, Point(1), 0.4) == 1);
  CHECK(count_in_ball(PointSequence(), Point(1), 0.5) == 0);
}

TEST_CASE("grid counts equal pairwise counts") {
  for (std::size_t n : {1, 2}) {
    const PointSequence G(sample_unit_ball(n, 3000, 10 + n));
    const auto probes = sample_unit_ball(n, 500, 20 + n);
    for (double r : {0.2, 0.5, 0.9}) {
      const auto fast = count_in_balls(G, probes, r);
      for (std::size_t i = 0; i < probes.size(); ++i) REQUIRE(fast[i] == count_in_ball(G, probes[i], r));
      REQUIRE(fast == count_in_balls(G, probes, r, Exec::serial));
    }
    const PointSequence K(G.points(), Metric::kobayashi);
    const auto k = count_in_balls(K, probes, 0.5);
    for (std::size_t i = 0; i < probes.size(); ++i) REQUIRE(k[i] == count_in_ball(K, probes[i], 0.5));
  }
}

TEST_CASE("first-fit decomposition") {
  const auto G = reals({0.0, 0.1, 1.0, 1.1}, Metric::euclidean);
  const auto dec = greedy_decompose(G, 0.2);
  CHECK(dec.n_colors == 2);
  const auto cls = dec.classes();
  REQUIRE(cls.size() == 2);
  CHECK(cls[0] == std::vector<std::size_t>{0, 2});
  CHECK(cls[1] == std::vector<std::size_t>{1, 3});
  CHECK(greedy_decompose(radial_ladder(1, 10), 0.4).n_colors == 1);
}

TEST_CASE("grid decomposition matches the definition") {
  for (std::size_t n : {1, 2}) {
    const PointSequence G(sample_unit_ball(n, 800, 30 + n));
    for (double r : {0.3, 0.5, 0.8}) {
      const auto dec = greedy_decompose(G, r);
      REQUIRE(dec.color_of == first_fit(G, r));
      REQUIRE(dec.n_colors <= max_self_count(G, r));
      for (const auto& c : dec.classes()) {
        for (std::size_t a = 0; a < c.size(); ++a) {
          for (std::size_t b = a + 1; b < c.size(); ++b) REQUIRE(G.distance(c[a], c[b]) >= r);
        }
      }
    }
  }
}

TEST_CASE("maximal packing") {
  const auto P = maximal_packing(1, 0.5, 0.05, 20000, 3);
  CHECK(P.size() > 10);
  CHECK(separation_constant(P) >= 0.5);
  for (std::size_t i = 0; i + 1 < P.size(); ++i) REQUIRE(P[i].norm() <= P[i + 1].norm());
  for (std::size_t i = 0; i < P.size(); ++i) REQUIRE(P[i].norm() <= 0.95 + 1e-12);
  // Maximality: fresh invariant samples of K_eps are within delta of the packing.
  const auto probes = sample_unit_ball(1, 2000, 4);
  std::size_t far = 0;
  for (const auto& z : probes) {
    if (z.norm() > 0.95) continue;
    if (count_in_ball(P, z, 0.5) == 0) ++far;
  }
  CHECK(far <= 2);
  CHECK(maximal_packing(1, 0.5, 0.05, 20000, 3).points() == P.points());
}

TEST_CASE("ladders keep exact boundary distances") {
  const auto L = radial_ladder(1, 40);
  CHECK(L.boundary_distance(39) == std::exp(-40.0));
  CHECK(L[39].norm() <= 1.0);
  const auto u = Point::from_real(std::vector<double>{0.6, 0.0, 0.0, 0.8});
  const auto L2 = radial_ladder(2, 5, u);
  CHECK(L2[0][1] == cplx{0.0, 0.8 * (1.0 - std::exp(-1.0))});
}

TEST_CASE("perturbed lattice") {
  const auto G = perturbed_lattice(5, 0.1, 1);
  std::size_t expected = 1;
  for (int k = 1; k <= 5; ++k) expected += std::size_t{1} << (k + 2);
  CHECK(G.size() == expected);
  CHECK(separation_constant(G) > 0.2);
}

TEST_CASE("sequence validation") {
  CHECK_THROWS_AS(PointSequence({Point::basis(1, 0, 1.5)}), ValidationError);
  CHECK_THROWS_AS(PointSequence({Point(1), Point(2)}), ValidationError);
  CHECK_NOTHROW(PointSequence({Point::basis(1, 0, 1.5)}, Metric::euclidean));
  CHECK_THROWS_AS(PointSequence({Point::basis(1, 0, 0.5)}, Metric::pseudohyperbolic,
                                std::vector<double>{0.4}),
                  ValidationError);
}

TEST_CASE("induced Dirac measure") {
  const auto one = dirac_carleson_measure(reals({0.0}));
  REQUIRE(one.atoms().size() == 1);
  CHECK(one.atoms()[0].weight == 1.0);
  const auto ladder = dirac_carleson_measure(radial_ladder(1, 50));
  CHECK(ladder.atoms()[2].weight == doctest::Approx(std::exp(-6.0)).epsilon(1e-14));
  CHECK(ladder.total_mass() == doctest::Approx(1.0 / (std::exp(2.0) - 1.0)).epsilon(1e-12));
}

TEST_CASE("escape sums") {
  const auto L = radial_ladder(1, 50);
  const auto li2 = escape_sum(L, EscapeWeight::power(2.0), EscapeExponent::n);
  CHECK(li2.total == doctest::Approx(oracle::li2(std::exp(-1.0))).epsilon(1e-12));
  CHECK(std::abs(li2.total - 0.40875) < 1e-4);
  const auto mass = escape_sum(L, EscapeWeight::none(), EscapeExponent::n_plus_1);
  CHECK(mass.total == doctest::Approx(dirac_carleson_measure(L).total_mass()).epsilon(1e-14));
  CHECK(mass.cauchy());
  CHECK(mass.partial_sums.size() == 50);
  // h(x) = exp(-1/x) turns d^n h(-1/log d) into d^{n+1}.
  const auto ex = escape_sum(L, EscapeWeight::exp_scaled(1.0), EscapeExponent::n);
  CHECK(ex.total == doctest::Approx(mass.total).epsilon(1e-12));
  CHECK_THROWS_AS(EscapeWeight::custom([](double x) { return 1.0 / x; }), ParameterError);
  CHECK_THROWS_AS(escape_sum(reals({0.0}), EscapeWeight::power(1.0), EscapeExponent::n), ParameterError);
  CHECK(escape_sum(reals({0.0}), EscapeWeight::none(), EscapeExponent::two_n).total == 1.0);
}

TEST_CASE("shell counts") {
  const auto L = radial_ladder(1, 24);
  const auto sc = shell_counts(L, Point(1));
  for (std::size_t c : sc.counts) CHECK(c <= 2);
  CHECK(std::abs(sc.slope) < 0.2);
  CHECK(sc.within_bound());
  const auto P = maximal_packing(1, 0.5, 1e-3, 100000, 7);
  const auto ps = shell_counts(P, Point(1), std::atanh(1.0 - 1e-3), 2);
  CHECK(std::abs(ps.slope - 1.0) < 0.2);
  CHECK(ps.counts == shell_counts(P, Point(1), std::atanh(1.0 - 1e-3), 2, Exec::serial).counts);
  const auto empty = shell_counts(reals({0.0}), Point(1));
  CHECK(empty.counts.size() == 1);
}

}
