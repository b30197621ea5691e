#include <doctest.h>

#include <cmath>

#include "carleson/ball.hpp"
#include "carleson/errors.hpp"
#include "carleson/invariant_measure.hpp"

using namespace carleson;

namespace {

MCConfig mc_with(std::size_t samples, std::uint64_t seed) {
  MCConfig mc;
  mc.n_samples = samples;
  mc.seed = seed;
  return mc;
}

}  // namespace

TEST_SUITE("invariant_measure") {

TEST_CASE("density values") {
  CHECK(ek_density(Point(2)) == 1.0);
  CHECK(ek_density(Point::basis(1, 0, 0.6)) == doctest::Approx(2.441406).epsilon(1e-6));
  CHECK(ek_density(Point::basis(1, 0, 0.6), EKBackend::boundary_distance) ==
        doctest::Approx(1.0 / 0.16));
  CHECK_THROWS_AS(ek_density(Point::basis(1, 0, 1.0)), DomainError);
}

TEST_CASE("measure of the disc of radius 1/2") {
  CHECK(ek_ball_measure_exact(1, 0.5) == doctest::Approx(1.0 / 3.0));
  const auto e = ek_ball_measure(Point(1), 0.5, mc_with(100000, 1));
  CHECK(e.within(1.0 / 3.0));
  CHECK(check_ek_exact(1, 0.5, mc_with(100000, 2)).passed());
  CHECK(check_ek_exact(2, 0.7, mc_with(100000, 3)).passed());
}

TEST_CASE("invariance under automorphisms") {
  for (double x : {0.3, 0.6, 0.9}) {
    const auto e = ek_ball_measure(Point::basis(2, 0, x), 0.5, mc_with(100000, 4));
    CHECK(e.within(ek_ball_measure_exact(2, 0.5)));
  }
  CHECK(check_ek_invariance(Point::basis(1, 0, 0.5), 0.5, 3, mc_with(100000, 5)).passed());
}

TEST_CASE("shrinking balls") {
  const Point z0 = Point::basis(1, 0, 0.4);
  const double r = 1e-3;
  const double approx = ek_density(z0) * ball_volume(z0, r);
  CHECK(ek_ball_measure_exact(1, r) == doctest::Approx(approx).epsilon(1e-5));
}

TEST_CASE("two-sided bound and the inf property") {
  CHECK(check_ek_two_sided(1, {0.0, 0.5, 0.9}, {0.3, 0.5, 0.7}, mc_with(50000, 6)).passed());
  const auto inf = check_ek_inf_property(2, 50, 7);
  CHECK(inf.passed());
  CHECK(inf.statistic >= 1.0 - 1e-5);
}

TEST_CASE("sandwich against the kernel diagonal") {
  std::vector<double> grid;
  for (int i = 0; i < 200; ++i) grid.push_back(0.995 * i / 199.0);
  CHECK(check_ek_sandwich(2, grid).passed());
}

TEST_CASE("determinants and Jacobians") {
  CHECK(determinant({2.0, 1.0, 1.0, 3.0}, 2) == doctest::Approx(5.0));
  CHECK(determinant({0.0, 1.0, 1.0, 0.0}, 2) == doctest::Approx(-1.0));
  // z -> c z in C^1 has real Jacobian |c|^2.
  const cplx c{0.3, 0.4};
  CHECK(real_jacobian_det([&](const Point& u) { return u * c; }, Point(1)) ==
        doctest::Approx(0.25).epsilon(1e-8));
  // phi_a at 0 in the disc: |phi_a'(0)|^2 = (1 - |a|^2)^2.
  const Point a = Point::basis(1, 0, 0.6);
  CHECK(real_jacobian_det([&](const Point& u) { return ball_automorphism(a, u); }, Point(1)) ==
        doctest::Approx(0.4096).epsilon(1e-7));
}

}
