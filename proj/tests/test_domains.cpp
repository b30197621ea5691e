#include <doctest.h>

#include <cmath>

#include "carleson/ball.hpp"
#include "carleson/domains.hpp"
#include "carleson/errors.hpp"
#include "carleson/rng.hpp"

using namespace carleson;

TEST_SUITE("domains") {

TEST_CASE("unit ball boundary distance") {
  const UnitBallDomain D(2);
  CHECK(D.boundary_distance(Point(2)) == 1.0);
  CHECK(D.boundary_distance(Point::basis(2, 0, 0.6)) == doctest::Approx(0.4));
  CHECK_THROWS_AS(D.boundary_distance(Point::basis(2, 0, 1.2)), DomainError);
}

TEST_CASE("ellipsoid nearest boundary point along the minor axis") {
  const EllipsoidDomain E({2.0, 1.0});
  CHECK(E.boundary_distance(Point(1)) == doctest::Approx(1.0).epsilon(1e-9));
  // The generic multi-start search finds the same point.
  const Point q = E.nearest_boundary_search(Point(1));
  CHECK(distance(q, Point(1)) == doctest::Approx(1.0).epsilon(1e-6));
  const Point z{cplx{0.5, 0.2}};
  CHECK(distance(E.nearest_boundary(z), z) ==
        doctest::Approx(distance(E.nearest_boundary_search(z), z)).epsilon(1e-5));
}

TEST_CASE("analytic and finite-difference gradients agree") {
  const EllipsoidDomain E({1.0, 0.9, 0.8, 0.7});
  const PerturbedBallDomain P(2, 0.1, Point::basis(2, 0, 0.5), 0.3);
  const Point z = Point::from_real(std::vector<double>{0.2, -0.1, 0.3, 0.15});
  for (const Domain* D : {static_cast<const Domain*>(&E), static_cast<const Domain*>(&P)}) {
    const Point a = *D->dpsi_analytic(z);
    const Point f = D->dpsi_finite_difference(z);
    CHECK(distance(a, f) < 1e-6);
  }
}

TEST_CASE("bounds collapse to the ball distance in the ball") {
  const UnitBallDomain D(2);
  const Point z = Point::basis(2, 0, 0.3), w = Point::basis(2, 1, 0.6);
  const auto b = kobayashi_bounds(D, z, w);
  CHECK(b.lower == doctest::Approx(kobayashi_distance(z, w)).epsilon(1e-12));
  CHECK(b.upper == doctest::Approx(kobayashi_distance(z, w)).epsilon(1e-12));
}

TEST_CASE("ellipsoid bounds bracket with a gap") {
  const EllipsoidDomain E({1.0, 1.0, 0.6, 0.6});
  const Point z = Point::basis(2, 0, 0.2), w = Point::basis(2, 0, 0.8);
  const auto b = kobayashi_bounds(E, z, w);
  CHECK(b.upper_found);
  CHECK(b.lower > 0.0);
  CHECK(b.lower < b.upper);
  // Lower bound from B(0, 1): the ellipsoid sits in the unit ball.
  CHECK(b.lower == doctest::Approx(kobayashi_distance(z, w)).epsilon(1e-9));
  // Inscribed ball B(0, 0.6) gives an upper bound for points inside it.
  const Point u = Point::basis(2, 1, 0.1), v = Point::basis(2, 1, 0.4);
  const double inner = kobayashi_in_ball({Point(2), 0.6}, u, v);
  CHECK(kobayashi_bounds(E, u, v).upper <= inner + 1e-12);
}

TEST_CASE("boundary constants at the origin of the ball") {
  const UnitBallDomain D(1);
  std::vector<Point> probes;
  for (int k = 1; k <= 30; ++k) probes.push_back(Point::basis(1, 0, 1.0 - std::pow(2.0, -k)));
  const auto e = estimate_boundary_constants(D, Point(1), probes);
  // k(0, t) + log(1 - t)/2 = log(1 + t)/2 lies in [0, log(2)/2].
  CHECK(e.c0 >= 0.0);
  CHECK(e.C0 <= 0.5 * std::log(2.0) + 1e-12);
  CHECK(e.C0 == doctest::Approx(0.346574).epsilon(1e-5));
  const auto same = estimate_boundary_constants(D, Point(1), {probes[3], probes[3]});
  CHECK(same.c0 == doctest::Approx(same.C0));
}

TEST_CASE("distance comparison constant") {
  const UnitBallDomain D(2);
  const auto origin = check_distance_comparison(D, Point(2), 0.5, 2000, 1);
  CHECK(origin.passed());
  CHECK(origin.statistic <= 1.0 + 1e-12);
  for (double d : {0.5, 0.1, 0.01, 0.001}) {
    for (double r : {0.3, 0.7}) {
      const auto rep = check_distance_comparison(D, Point::basis(2, 0, 1.0 - d), r, 2000, 2);
      REQUIRE(rep.passed());
      REQUIRE(rep.statistic <= 4.0);
    }
  }
  const EllipsoidDomain E({1.0, 1.0, 0.8, 0.8});
  CHECK(check_distance_comparison(E, Point::basis(2, 1, 0.7), 0.5, 2000, 3).passed());
}

TEST_CASE("defining-function inequality") {
  const UnitBallDomain D(1);
  const auto rep = check_defining_fn_inequality(D, Point::basis(1, 0, 0.9), 0.5, 5000, 1);
  CHECK(rep.passed());
  CHECK(rep.statistic > 0.0);
  const EllipsoidDomain E({1.0, 0.7});
  CHECK(check_defining_fn_inequality(E, Point::basis(1, 0, 0.8), 0.5, 5000, 2).passed());
}

TEST_CASE("c_{2,r} / (1 - r^2) levels off as r grows") {
  const UnitBallDomain D(1);
  const auto rep =
      check_defining_fn_scaling(D, Point::basis(1, 0, 0.9), {0.5, 0.7, 0.9, 0.95, 0.99}, 5000, 1);
  CHECK(rep.passed());
  CHECK(rep.details.at("c2").get<double>() > 0.0);
}

TEST_CASE("inner Kobayashi balls lie in the domain") {
  const EllipsoidDomain E({1.0, 1.0, 0.6, 0.6});
  const Point z0 = Point::basis(2, 1, 0.5);
  for (const auto& z : sample_inner_kobayashi_ball(E, z0, 0.5, 2000, 4)) REQUIRE(E.contains(z));
  const auto B = tangent_inscribed_ball(E, z0);
  CHECK(distance(B.center, z0) <= B.radius);
  CHECK(B.radius - distance(B.center, z0) == doctest::Approx(E.boundary_distance(z0)).epsilon(1e-6));
}

TEST_CASE("domains round-trip through JSON") {
  const EllipsoidDomain E({1.0, 0.5});
  const auto D = domain_from_json(E.to_json());
  CHECK(D->type() == "ellipsoid");
  CHECK(D->psi(Point{cplx{0.3, 0.1}}) == doctest::Approx(E.psi(Point{cplx{0.3, 0.1}})));
  CHECK_THROWS(domain_from_json({{"type", "torus"}}));
}

}
