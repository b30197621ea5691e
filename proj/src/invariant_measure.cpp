#include "carleson/invariant_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "carleson/ball.hpp"
#include "carleson/errors.hpp"
#include "carleson/rng.hpp"

namespace carleson {

double ek_density(const Point& z, EKBackend backend) {
  require_in_ball(z, "ek_density");
  const double e = static_cast<double>(z.dim() + 1);
  const double base = backend == EKBackend::bergman ? 1.0 - z.norm2() : 1.0 - z.norm();
  const double v = std::pow(base, -e);
  if (!(base > 0.0) || !std::isfinite(v)) {
    throw DomainError("Eisenman-Kobayashi density overflows this close to the sphere");
  }
  return v;
}

EstimateWithError ek_ball_measure(const Point& z0, double r, const MCConfig& mc,
                                  EKBackend backend) {
  const KobayashiBall ball = kobayashi_ball(z0, r);
  return integrate_density([&](const Point& z) { return ek_density(z, backend); },
                           ball.ellipsoid(), mc);
}

double ek_ball_measure_exact(std::size_t n, double r) {
  if (!(r > 0.0 && r < 1.0)) throw ParameterError("r must lie in (0,1)");
  return std::pow(r * r / (1.0 - r * r), static_cast<double>(n));
}

CheckReport check_ek_exact(std::size_t n, double r, const MCConfig& mc) {
  const auto est = ek_ball_measure(Point(n), r, mc);
  const double exact = ek_ball_measure_exact(n, r);
  CheckReport rep;
  rep.check = "ek_exact";
  rep.statistic = est.value;
  rep.bound = exact;
  rep.std_error = est.std_error;
  rep.n_samples = mc.n_samples;
  rep.seed = mc.seed;
  rep.verdict = est.within(exact) ? Verdict::pass : Verdict::fail;
  rep.details = {{"n", n}, {"r", r}, {"z_score", (est.value - exact) / est.std_error}};
  return rep;
}

CheckReport check_ek_invariance(const Point& z0, double r, std::size_t trials,
                                const MCConfig& mc) {
  const std::size_t n = z0.dim();
  CounterRng rng(mc.seed, 0x696e76);
  const auto base = ek_ball_measure(z0, r, mc.with_label(0));
  double worst = 0.0;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t t = 0; t < trials; ++t) {
    const Point a = draw_unit_ball(n, rng) * cplx{0.9, 0.0};
    const Point z1 = ball_automorphism(a, z0);
    const auto est = ek_ball_measure(z1, r, mc.with_label(t + 1));
    const double se = std::hypot(base.std_error, est.std_error);
    const double z = std::abs(est.value - base.value) / se;
    worst = std::max(worst, z);
    rows.push_back({{"center", z1.to_real()}, {"value", est.value}, {"std_error", est.std_error}});
  }
  CheckReport rep;
  rep.check = "ek_invariance";
  rep.statistic = worst;
  rep.bound = 3.0;
  rep.std_error = base.std_error;
  rep.n_samples = mc.n_samples;
  rep.seed = mc.seed;
  rep.verdict = worst <= 3.0 ? Verdict::pass : Verdict::fail;
  rep.details = {{"base", base.value}, {"images", rows}};
  return rep;
}

CheckReport check_ek_two_sided(std::size_t n, const std::vector<double>& z0_radii,
                               const std::vector<double>& radii, const MCConfig& mc) {
  if (z0_radii.empty() || radii.empty()) throw ParameterError("empty grid");
  const double dn = static_cast<double>(n);
  std::vector<double> lower_fit, upper_fit;
  double worst_rel_error = 0.0;
  nlohmann::json cells = nlohmann::json::array();
  std::uint64_t label = 0;
  for (double t : z0_radii) {
    const Point z0 = Point::basis(n, 0, t);
    const double d = 1.0 - t;
    double c = std::numeric_limits<double>::infinity();
    double C = 0.0;
    for (double r : radii) {
      const auto est = ek_ball_measure(z0, r, mc.with_label(label++));
      const double lower_shape = std::pow(r, 2.0 * dn) * std::pow(1.0 - r, dn + 1.0);
      const double upper_shape = 1.0 / (std::pow(d, dn) * std::pow(1.0 - r, dn));
      c = std::min(c, est.value / lower_shape);
      C = std::max(C, est.value / upper_shape);
      worst_rel_error = std::max(worst_rel_error, est.std_error / est.value);
      cells.push_back({{"z0", t}, {"r", r}, {"kappa", est.value}, {"std_error", est.std_error}});
    }
    lower_fit.push_back(c);
    upper_fit.push_back(C);
  }
  // Errors are judged against the fitted lower bound, which the estimate
  // itself attains in the tightest cell of each row.
  const double c_spread = *std::max_element(lower_fit.begin(), lower_fit.end()) /
                          *std::min_element(lower_fit.begin(), lower_fit.end());
  const double C_growth = *std::max_element(upper_fit.begin(), upper_fit.end()) / upper_fit.front();

  CheckReport rep;
  rep.check = "ek_two_sided";
  rep.statistic = std::max(c_spread, C_growth);
  rep.bound = 10.0;
  rep.n_samples = mc.n_samples;
  rep.seed = mc.seed;
  if (worst_rel_error > 0.1) {
    rep.verdict = Verdict::inconclusive;
  } else {
    rep.verdict = rep.statistic < rep.bound ? Verdict::pass : Verdict::fail;
  }
  rep.details = {{"c11", *std::min_element(lower_fit.begin(), lower_fit.end())},
                 {"C11", *std::max_element(upper_fit.begin(), upper_fit.end())},
                 {"c11_by_z0", lower_fit},
                 {"C11_by_z0", upper_fit},
                 {"c11_spread", c_spread},
                 {"C11_growth", C_growth},
                 {"worst_relative_error", worst_rel_error},
                 {"cells", cells}};
  return rep;
}

double determinant(std::vector<double> a, std::size_t m) {
  double det = 1.0;
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < m; ++i) {
      if (std::abs(a[i * m + k]) > std::abs(a[p * m + k])) p = i;
    }
    if (a[p * m + k] == 0.0) return 0.0;
    if (p != k) {
      for (std::size_t j = 0; j < m; ++j) std::swap(a[k * m + j], a[p * m + j]);
      det = -det;
    }
    det *= a[k * m + k];
    for (std::size_t i = k + 1; i < m; ++i) {
      const double f = a[i * m + k] / a[k * m + k];
      for (std::size_t j = k; j < m; ++j) a[i * m + j] -= f * a[k * m + j];
    }
  }
  return det;
}

double real_jacobian_det(const std::function<Point(const Point&)>& f, const Point& u, double h) {
  const std::size_t m = 2 * u.dim();
  std::vector<double> jac(m * m);
  const std::vector<double> x = u.to_real();
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<double> xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    const auto fp = f(Point::from_real(xp)).to_real();
    const auto fm = f(Point::from_real(xm)).to_real();
    for (std::size_t r = 0; r < m; ++r) jac[r * m + c] = (fp[r] - fm[r]) / (2.0 * h);
  }
  return determinant(std::move(jac), m);
}

CheckReport check_ek_inf_property(std::size_t n, std::size_t samples, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  double worst = std::numeric_limits<double>::infinity();
  double extremal_gap = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Point a = draw_unit_ball(n, rng) * cplx{0.95, 0.0};
    const double lambda = s == 0 ? 1.0 : 0.5 + 0.5 * rng.uniform();
    auto f = [&](const Point& z) { return ball_automorphism(a, z * cplx{lambda, 0.0}); };
    const double jac = std::abs(real_jacobian_det(f, Point(n)));
    const double ratio = (1.0 / jac) / ek_density(a);
    worst = std::min(worst, ratio);
    if (s == 0) extremal_gap = std::abs(ratio - 1.0);
  }
  CheckReport rep;
  rep.check = "ek_inf_property";
  rep.statistic = worst;
  rep.bound = 1.0 - 1e-5;
  rep.n_samples = samples;
  rep.seed = seed;
  rep.verdict = worst >= rep.bound ? Verdict::pass : Verdict::fail;
  rep.details = {{"extremal_gap", extremal_gap}};
  return rep;
}

CheckReport check_ek_sandwich(std::size_t n, const std::vector<double>& radii) {
  const double e = static_cast<double>(n + 1);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double t : radii) {
    const Point z = Point::basis(n, 0, t);
    const double v = ek_density(z) * std::pow(1.0 - t, e);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CheckReport rep;
  rep.check = "ek_sandwich";
  rep.statistic = hi;
  rep.bound = 1.0;
  rep.n_samples = radii.size();
  const double floor = std::pow(2.0, -e);
  rep.verdict = lo >= floor * (1.0 - 1e-12) && hi <= 1.0 + 1e-12 ? Verdict::pass : Verdict::fail;
  rep.details = {{"min", lo}, {"max", hi}, {"lower_bound", floor}};
  return rep;
}

}  // namespace carleson
