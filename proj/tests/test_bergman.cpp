#include <doctest.h>

#include <cmath>

#include "carleson/bergman.hpp"
#include "carleson/errors.hpp"
#include "carleson/measure.hpp"
#include "carleson/rng.hpp"
#include "oracles.hpp"

using namespace carleson;

namespace {

Point real1(double x) { return Point::basis(1, 0, x); }

MCConfig mc_with(std::size_t samples, std::uint64_t seed) {
  MCConfig mc;
  mc.n_samples = samples;
  mc.seed = seed;
  return mc;
}

}  // namespace

TEST_SUITE("bergman") {

TEST_CASE("kernel values") {
  const Point z = Point::from_real(std::vector<double>{0.2, 0.1, -0.3, 0.4});
  CHECK(kernel(z, Point(2)) == cplx{1.0, 0.0});
  CHECK(std::real(kernel(real1(0.6), real1(0.6))) == doctest::Approx(2.441406).epsilon(1e-6));
  const Point w = Point::from_real(std::vector<double>{-0.5, 0.2, 0.1, 0.1});
  CHECK(kernel(z, w) == std::conj(kernel(w, z)));
  CHECK_THROWS_AS(kernel(real1(1.0), real1(0.5)), DomainError);
}

TEST_CASE("normalized kernel") {
  CHECK(normalized_kernel(Point(2), Point::basis(2, 1, 0.7)) == cplx{1.0, 0.0});
  CHECK(normalized_kernel_sq(real1(0.6), real1(0.6)) == doctest::Approx(2.441406).epsilon(1e-6));
  CHECK(std::norm(normalized_kernel(real1(0.6), real1(-0.3))) ==
        doctest::Approx(normalized_kernel_sq(real1(0.6), real1(-0.3))).epsilon(1e-13));
}

TEST_CASE("normalized kernels have unit norm") {
  for (double x : {0.0, 0.5, 0.9}) {
    const auto e = berezin_transform(Measure::lebesgue(2), Point::basis(2, 0, x), mc_with(50000, 3));
    CHECK(e.within(1.0));
    const auto direct =
        kernel_mass_direct(Measure::lebesgue(1), real1(x), mc_with(100000, 4));
    CHECK(direct.within(1.0));
  }
}

TEST_CASE("Berezin transform closed cases") {
  const auto dirac = berezin_transform(Measure::dirac(Point(1)), real1(0.6), mc_with(1000, 1));
  CHECK(dirac.value == doctest::Approx(0.4096).epsilon(1e-12));
  CHECK(dirac.std_error == 0.0);
  const auto lin = berezin_transform(Measure::power(1, 1.0), Point(1), mc_with(100000, 2));
  CHECK(lin.within(0.5));
  CHECK(kernel_mass_exact(Measure::power(1, 1.0), Point(1)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("power-density Berezin transform against disc quadrature") {
  for (double s : {0.5, 1.0, 2.0}) {
    for (double x : {0.0, 0.3, 0.7}) {
      const double exact = berezin_power_density(1, s, x * x);
      CHECK(exact == doctest::Approx(oracle::berezin_power_disc(s, x)).epsilon(2e-5));
    }
  }
}

TEST_CASE("Gauss hypergeometric series") {
  for (double x : {0.1, 0.5, 0.9}) {
    CHECK(hypergeometric_2f1(1.0, 1.0, 2.0, x) == doctest::Approx(-std::log(1.0 - x) / x).epsilon(1e-10));
  }
  // Gauss: 2F1(a,b;c;1) = G(c)G(c-a-b)/(G(c-a)G(c-b)).
  const double g = std::tgamma(3.5) * std::tgamma(1.0) / (std::tgamma(2.5) * std::tgamma(2.0));
  CHECK(hypergeometric_2f1(1.0, 1.5, 3.5, 1.0) == doctest::Approx(g).epsilon(1e-10));
}

TEST_CASE("MC of power densities agrees with the closed form") {
  for (double s : {-0.5, 0.5}) {
    const Measure mu = Measure::power(2, s);
    const Point z = Point::basis(2, 0, 0.8);
    const auto e = berezin_transform(mu, z, mc_with(100000, 5));
    CHECK(e.within(kernel_mass_exact(mu, z)));
    const auto d = kernel_mass_direct(mu, z, mc_with(100000, 6));
    CHECK(d.within(kernel_mass_exact(mu, z), 4.0));
  }
}

TEST_CASE("monomial norms") {
  CHECK(monomial_norm2({1}) == doctest::Approx(0.5));
  CHECK(monomial_norm2({1, 1}) == doctest::Approx(1.0 / 12.0));
  CHECK(monomial_norm2({0, 0}) == 1.0);
  CHECK(multi_indices(2, 2).size() == 6);
  const auto p = Polynomial::random(2, 2, 7);
  CHECK(p.degree() == 2);
  CHECK(p.weighted_norm2(0.0) == doctest::Approx(p.norm2()));
}

TEST_CASE("kernel upper bound on the radial grid") {
  std::vector<double> grid;
  for (int i = 0; i < 1000; ++i) grid.push_back(0.999 * i / 999.0);
  const auto rep = check_kernel_upper(2, grid);
  CHECK(rep.passed());
  CHECK(rep.statistic == doctest::Approx(1.0));
  // K(z,z) d^{n+1} = (1 + |z|)^{-(n+1)}
  const double k = std::real(kernel(real1(0.9), real1(0.9))) * 0.01;
  CHECK(k == doctest::Approx(std::pow(0.1 / 0.19, 2)).epsilon(1e-12));
  CHECK(k == doctest::Approx(0.277).epsilon(1e-3));
}

TEST_CASE("normalized kernel lower bound") {
  const double bound = std::pow(0.25 * 1.5 / 16.0, 2);
  CHECK(bound == doctest::Approx(0.000549).epsilon(1e-3));
  std::vector<Point> centers;
  for (double d : {0.5, 0.1, 0.01, 0.001}) centers.push_back(real1(1.0 - d));
  const auto rep = check_kernel_lower(centers, 0.5, 10000, 1);
  CHECK(rep.passed());
  CHECK(rep.bound == doctest::Approx(bound));
  CHECK(check_kernel_lower({Point(1)}, 0.5, 1000, 2).statistic == doctest::Approx(1.0));
}

TEST_CASE("reproducing property and the diagonal identity") {
  for (std::size_t n : {1, 2}) {
    for (const auto& alpha : multi_indices(n, 2)) {
      const Point z = Point::basis(n, 0, 0.3);
      REQUIRE(check_reproducing(z, alpha, mc_with(50000, 11)).passed());
    }
    CHECK(check_diagonal_identity(Point::basis(n, 0, 0.4), mc_with(100000, 12)).passed());
  }
}

TEST_CASE("a kernel with the wrong sign fails the reproducing check") {
  KernelFn bad = [](const Point& z, const Point& w) {
    const double n1 = static_cast<double>(z.dim() + 1);
    return std::pow(1.0 + inner(z, w), -n1);
  };
  const auto rep = check_reproducing(real1(0.3), {1}, mc_with(50000, 13), bad);
  CHECK_FALSE(rep.passed());
}

TEST_CASE("submean inequality") {
  Polynomial f;
  f.n = 1;
  f.terms = {{{0}, 1.0}, {{1}, 1.0}};  // 1 + z
  const auto rep = check_submean(f, real1(0.3), 0.5, mc_with(100000, 14));
  CHECK(rep.passed());
  const auto zero = check_submean(Polynomial::monomial(1, {1}), Point(1), 0.5, mc_with(10000, 15));
  CHECK(zero.verdict != Verdict::fail);
  for (double d : {0.5, 0.1, 0.01}) {
    CHECK(check_submean(Polynomial::random(2, 2, 3), Point::basis(2, 0, 1.0 - d), 0.5,
                        mc_with(50000, 16))
              .passed());
  }
}

}
