#include <doctest.h>

#include <cmath>

#include "carleson/ball.hpp"
#include "carleson/cover.hpp"
#include "carleson/domains.hpp"
#include "carleson/errors.hpp"

using namespace carleson;

TEST_SUITE("cover") {

TEST_CASE("disjointness threshold") {
  CHECK(disjoint_threshold(0.5 / 3.0) == doctest::Approx(2.0 * (0.5 / 3.0) / (1.0 + 0.25 / 9.0)));
  // Tangent balls B(0, t) and B(x, t) in the disc: rho(0, x) = threshold.
  const double t = 0.2;
  const double x = disjoint_threshold(t);
  CHECK(std::atanh(x) == doctest::Approx(2.0 * std::atanh(t)));
}

TEST_CASE("candidate net") {
  const auto net = candidate_net(2, 0.1, 500, 3);
  REQUIRE(net.size() == 500);
  CHECK(net[0].norm() == 0.0);
  for (const auto& z : net) REQUIRE(z.norm() <= 0.9 + 1e-12);
  CHECK(candidate_net(2, 0.1, 500, 3) == net);
}

TEST_CASE("a single ball covers a small compact set") {
  const auto c = greedy_cover(1, 0.6, 0.5, 1);
  CHECK(c.centers.size() == 1);
  CHECK(c.covered());
}

TEST_CASE("cover of the disc") {
  const auto c = greedy_cover(1, 0.1, 0.5, 2);
  CHECK(c.probes >= 10000);
  CHECK(c.covered());
  CHECK(c.disjoint());
  CHECK(c.stable());
  CHECK(c.multiplicity_radius == doctest::Approx(0.75));
  double best = 1.0;
  for (std::size_t i = 0; i < c.centers.size(); ++i) {
    for (std::size_t j = i + 1; j < c.centers.size(); ++j) {
      best = std::min(best, pseudo_distance(c.centers[i], c.centers[j]).pseudo);
    }
  }
  CHECK(best >= c.disjoint_threshold);
  CHECK(best == doctest::Approx(c.min_center_distance));
  CoverOptions serial;
  serial.exec = Exec::serial;
  CHECK(greedy_cover(1, 0.1, 0.5, 2, serial).centers == c.centers);
}

TEST_CASE("climbing never lowers the probe maximum") {
  CoverOptions raw;
  raw.polish_starts = 0;
  const auto a = greedy_cover(1, 0.05, 0.5, 4, raw);
  const auto b = greedy_cover(1, 0.05, 0.5, 4);
  CHECK(a.centers == b.centers);
  CHECK(b.multiplicity >= a.multiplicity);
  CHECK(b.multiplicity_refined >= a.multiplicity_refined);
}

TEST_CASE("only the unit ball is supported") {
  CHECK_NOTHROW(greedy_cover(UnitBallDomain(1), 0.5, 0.5, 1));
  CHECK_THROWS_AS(greedy_cover(EllipsoidDomain({1.0, 0.5}), 0.5, 0.5, 1), ParameterError);
}

}
