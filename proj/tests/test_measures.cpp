#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "carleson/ball.hpp"
#include "carleson/errors.hpp"
#include "carleson/measures.hpp"
#include "carleson/sequences.hpp"

using namespace carleson;

namespace {

MCConfig mc_with(std::size_t samples, std::uint64_t seed) {
  MCConfig mc;
  mc.n_samples = samples;
  mc.seed = seed;
  return mc;
}

std::vector<GrowthRow> synthetic(double slope, double noise = 0.0) {
  std::vector<GrowthRow> rows;
  for (int k = 1; k <= 12; ++k) {
    const double d = std::pow(2.0, -k);
    const double wobble = 1.0 + noise * ((k % 3) - 1);
    rows.push_back({Point(1), d, std::pow(d, slope) * wobble, 0.0});
  }
  return rows;
}

}  // namespace

TEST_SUITE("measures") {

TEST_CASE("measure of a ball") {
  const Point z0 = Point::basis(2, 0, 0.7);
  const auto ball = kobayashi_ball(z0, 0.5);
  CHECK(measure_of_ball(Measure::lebesgue(2), ball, mc_with(50000, 1)).within(ball_volume(z0, 0.5)));
  CHECK(measure_of_ball(Measure::dirac(Point(1)), kobayashi_ball(Point(1), 0.3), mc_with(10, 1)).value ==
        1.0);
  CHECK(measure_of_ball(Measure::dirac(Point(1)), kobayashi_ball(Point::basis(1, 0, 0.6), 0.2),
                        mc_with(10, 1))
            .value == 0.0);
}

TEST_CASE("growth classification") {
  CHECK(classify_growth(synthetic(0.0)).verdict == Verdict::pass);
  CHECK(classify_growth(synthetic(1.0)).verdict == Verdict::pass);
  const auto up = classify_growth(synthetic(-0.5));
  CHECK(up.verdict == Verdict::fail);
  CHECK(up.slope == doctest::Approx(-0.5).epsilon(1e-9));
  // Large growth with a slope that is not clearly negative stays undecided.
  auto jump = synthetic(0.0);
  for (std::size_t k = 6; k < 12; ++k) jump[k].value = k % 2 ? 50.0 : 1.0;
  CHECK(classify_growth(jump).verdict == Verdict::inconclusive);
  // Scattered values whose deep maximum stays below the shallow maximum.
  auto scatter = synthetic(0.0);
  scatter[0].value = 2.0;
  scatter[11].value = 0.5;
  for (int k = 6; k < 11; ++k) scatter[k].value = 0.05;
  CHECK(classify_growth(scatter).verdict == Verdict::pass);
  // Noisy MC rows.
  auto noisy = synthetic(0.0);
  for (auto& r : noisy) r.std_error = r.value;
  CHECK(classify_growth(noisy).verdict == Verdict::inconclusive);
  std::vector<GrowthRow> few{{Point(1), 0.5, 1.0, 0.0}};
  CHECK(classify_growth(few).verdict == Verdict::pass);
}

TEST_CASE("boundary schedule") {
  const auto plain = boundary_schedule(Measure::lebesgue(2), 5, true);
  CHECK(plain.size() == 11);
  CHECK(std::count_if(plain.begin(), plain.end(),
                      [](const ScheduleCenter& c) { return c.kind == "origin"; }) == 1);
  for (const auto& c : plain) CHECK(c.d == doctest::Approx(1.0 - c.z.norm()).epsilon(1e-12));
  const auto ladder = dirac_carleson_measure(radial_ladder(1, 200));
  std::size_t atoms = 0;
  for (const auto& c : boundary_schedule(ladder, 4)) atoms += c.kind == "atom" ? 1 : 0;
  CHECK(atoms <= 64);
  CHECK(atoms > 10);
}

TEST_CASE("ratio test") {
  const auto centers = boundary_schedule(Measure::lebesgue(1), 12);
  const auto nu = carleson_ratio_test(Measure::lebesgue(1), 0.5, centers, mc_with(20000, 2));
  CHECK(nu.fit.verdict == Verdict::pass);
  CHECK(nu.fit.slope == doctest::Approx(0.0).epsilon(1e-9));
  const auto neg = carleson_ratio_test(Measure::power(1, -0.5), 0.5, centers, mc_with(20000, 3));
  CHECK(neg.fit.verdict == Verdict::fail);
  CHECK(std::abs(neg.fit.slope + 0.5) < 0.1);
  const auto pos = carleson_ratio_test(Measure::power(1, 0.5), 0.5, centers, mc_with(20000, 4));
  CHECK(pos.fit.verdict == Verdict::pass);
  CHECK(pos.sup <= 1.0 + 1e-2);
}

TEST_CASE("Berezin test") {
  const auto centers = boundary_schedule(Measure::lebesgue(1), 10, true);
  const auto nu = carleson_berezin_test(Measure::lebesgue(1), centers, mc_with(20000, 5));
  CHECK(nu.sup.within(1.0));
  const auto dirac = carleson_berezin_test(Measure::dirac(Point(1)), centers, mc_with(100, 6));
  CHECK(dirac.sup.value == doctest::Approx(1.0));
  CHECK(dirac.fit.verdict == Verdict::pass);
  const auto neg = carleson_berezin_test(Measure::power(1, -0.5), centers, mc_with(20000, 7));
  CHECK(neg.fit.verdict == Verdict::fail);
}

TEST_CASE("functional test") {
  const auto centers = boundary_schedule(Measure::lebesgue(1), 8);
  const auto nu = carleson_functional_test(Measure::lebesgue(1), centers, 10, 1);
  CHECK(nu.constant_ratio == doctest::Approx(1.0));
  for (const auto& r : nu.kernel_rows) CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
  for (double q : nu.polynomial_ratios) CHECK(q == doctest::Approx(1.0).epsilon(1e-10));
  const auto dirac = carleson_functional_test(Measure::dirac(Point(1), 2.0), centers, 5, 1);
  CHECK(dirac.constant_ratio == doctest::Approx(2.0));
  for (const auto& r : dirac.kernel_rows) {
    CHECK(r.value == doctest::Approx(2.0 * std::pow(1.0 - r.center.norm2(), 2)).epsilon(1e-10));
  }
}

TEST_CASE("three tests agree") {
  CarlesonConfig cfg;
  cfg.mc = mc_with(20000, 8);
  const auto nu = cross_check_equivalence(Measure::lebesgue(1), cfg);
  CHECK(nu.agreement);
  CHECK(nu.overall() == Verdict::pass);
  const auto neg = cross_check_equivalence(Measure::power(1, -0.5), cfg);
  CHECK(neg.agreement);
  CHECK(neg.overall() == Verdict::fail);
  CHECK(std::abs(neg.berezin_fit.slope + 0.5) < 0.15);
  const auto ladder = cross_check_equivalence(dirac_carleson_measure(radial_ladder(1, 24)), cfg);
  CHECK(ladder.agreement);
  CHECK(ladder.overall() == Verdict::pass);
}

}
