#include "carleson/ball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "carleson/errors.hpp"

namespace carleson {

namespace {

constexpr double kBoundaryGuard = 1e-12;
const double kRhoMax = std::nextafter(1.0, 0.0);

}  // namespace

void require_in_ball(const Point& z, const char* what) {
  if (!z.is_finite() || z.norm2() >= 1.0) {
    throw DomainError(std::string(what) + " must lie in the open unit ball");
  }
}

double pseudo_unchecked(const Point& z, const Point& w) {
  const Point delta = w - z;
  const double num = std::max(0.0, delta.norm2() - wedge_norm2(z, delta));
  const double denom = std::norm(cplx{1.0, 0.0} - inner(z, w));
  const double rho = std::sqrt(num / denom);
  return std::min(rho, kRhoMax);
}

DistancePair pseudo_distance(const Point& z, const Point& w) {
  if (z.dim() != w.dim()) throw ParameterError("point dimension mismatch");
  require_in_ball(z, "z");
  require_in_ball(w, "w");
  DistancePair d;
  d.pseudo = pseudo_unchecked(z, w);
  d.kobayashi = std::atanh(d.pseudo);
  return d;
}

double kobayashi_distance(const Point& z, const Point& w) {
  return pseudo_distance(z, w).kobayashi;
}

Point ball_automorphism(const Point& a, const Point& z) {
  if (a.dim() != z.dim()) throw ParameterError("point dimension mismatch");
  require_in_ball(a, "a");
  require_in_ball(z, "z");
  const double a2 = a.norm2();
  if (a2 == 0.0) return -z;
  const cplx za = inner(z, a);
  const double s = std::sqrt(1.0 - a2);
  const cplx denom = cplx{1.0, 0.0} - za;
  Point out(a.dim());
  for (std::size_t j = 0; j < a.dim(); ++j) {
    const cplx proj = za / a2 * a[j];
    out[j] = (a[j] - proj - s * (z[j] - proj)) / denom;
  }
  return out;
}

bool KobayashiBall::contains(const Point& z) const {
  return pseudo_unchecked(base, z) < pseudo_radius;
}

Ellipsoid KobayashiBall::ellipsoid() const {
  Ellipsoid e;
  e.center = center;
  const double nb = base.norm();
  e.axis = nb > 0.0 ? base * cplx{1.0 / nb, 0.0} : Point(base.dim());
  e.radial = radial_axis;
  e.transverse = transverse_axis;
  return e;
}

bool KobayashiBall::ellipsoid_contains(const Point& z) const {
  return ellipsoid().contains(z);
}

double KobayashiBall::volume() const { return ball_volume(base, pseudo_radius); }

KobayashiBall kobayashi_ball(const Point& z0, double r) {
  if (!(r > 0.0 && r < 1.0)) throw ParameterError("pseudo radius must lie in (0,1)");
  if (!z0.is_finite() || z0.norm() >= 1.0 - kBoundaryGuard) {
    throw DomainError("ball base point too close to the unit sphere");
  }
  const double s = z0.norm2();
  const double r2 = r * r;
  const double q = 1.0 - r2 * s;
  KobayashiBall b;
  b.base = z0;
  b.pseudo_radius = r;
  b.center = z0 * cplx{(1.0 - r2) / q, 0.0};
  b.radial_axis = r * (1.0 - s) / q;
  b.transverse_axis = r * std::sqrt((1.0 - s) / q);
  return b;
}

double ball_volume(const Point& z0, double r) {
  if (!(r > 0.0 && r < 1.0)) throw ParameterError("pseudo radius must lie in (0,1)");
  if (!z0.is_finite() || z0.norm() >= 1.0 - kBoundaryGuard) {
    throw DomainError("ball base point too close to the unit sphere");
  }
  const double n = static_cast<double>(z0.dim());
  const double s = z0.norm2();
  return std::pow(r, 2.0 * n) * std::pow((1.0 - s) / (1.0 - r * r * s), n + 1.0);
}

std::vector<Point> sample_ball_uniform(const KobayashiBall& ball, std::size_t count,
                                       std::uint64_t seed) {
  if (count == 0) throw ParameterError("sample count must be >= 1");
  const Ellipsoid e = ball.ellipsoid();
  CounterRng rng(seed, 0);
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(e.map(draw_unit_ball(e.dim(), rng)));
  }
  return out;
}

CheckReport check_lemma_ball_inequality(const Point& z0, double r, std::size_t samples,
                                        std::uint64_t seed) {
  const KobayashiBall ball = kobayashi_ball(z0, r);
  const double lhs = 1.0 - z0.norm2();
  double min_slack = std::numeric_limits<double>::infinity();
  double max_rhs = 0.0;
  for (const Point& z : sample_ball_uniform(ball, samples, seed)) {
    const Point v = z - z0;
    const double rhs = (1.0 - r * r) / 4.0 * (v.norm2() + std::abs(inner(v, z0)));
    min_slack = std::min(min_slack, lhs - rhs);
    max_rhs = std::max(max_rhs, rhs);
  }
  CheckReport rep;
  rep.check = "ball_inequality";
  rep.statistic = min_slack;
  rep.bound = 0.0;
  rep.verdict = min_slack > 0.0 ? Verdict::pass : Verdict::fail;
  rep.n_samples = samples;
  rep.seed = seed;
  rep.details = {{"lhs", lhs}, {"max_rhs", max_rhs}, {"r", r}};
  return rep;
}

CheckReport check_volume_sandwich(std::size_t n, const std::vector<double>& radii_z0,
                                  const std::vector<double>& radii_r) {
  double c1 = std::numeric_limits<double>::infinity();
  double C1 = 0.0;
  const double dn = static_cast<double>(n);
  for (double t : radii_z0) {
    const Point z0 = Point::basis(n, 0, t);
    const double d = 1.0 - t;
    for (double r : radii_r) {
      const double vol = ball_volume(z0, r);
      const double base = std::pow(r, 2.0 * dn) * std::pow(d, dn + 1.0);
      c1 = std::min(c1, vol / base);
      C1 = std::max(C1, vol * std::pow(1.0 - r * r, dn + 1.0) / base);
    }
  }
  CheckReport rep;
  rep.check = "volume_sandwich";
  rep.statistic = c1;
  rep.bound = 1.0;
  const double upper = std::pow(2.0, dn + 1.0);
  rep.verdict = (c1 >= 1.0 && C1 <= upper) ? Verdict::pass : Verdict::fail;
  rep.n_samples = radii_z0.size() * radii_r.size();
  rep.details = {{"c1", c1}, {"C1", C1}, {"C1_bound", upper}};
  return rep;
}

}  // namespace carleson
