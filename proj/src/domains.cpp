#include "carleson/domains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "carleson/ball.hpp"
#include "carleson/errors.hpp"
#include "carleson/rng.hpp"

namespace carleson {

namespace {

constexpr int kBisectionSteps = 80;
constexpr std::size_t kRandomDirections = 32;
constexpr std::uint64_t kDirectionSeed = 0x6b6f6261u;

/// Real gradient packed as a complex vector: g_j = psi_x + i psi_y.
Point real_gradient(const Domain& D, const Point& z) {
  Point g = D.dpsi(z);
  for (std::size_t j = 0; j < g.dim(); ++j) g[j] = 2.0 * std::conj(g[j]);
  return g;
}

Point normalized(Point u) {
  const double n = u.norm();
  u *= cplx{1.0 / n, 0.0};
  return u;
}

void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ValidationError("unknown domain key '" + key + "'");
  }
}

Point point_from_json(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Point::from_real(v);
}

}  // namespace

bool Domain::contains(const Point& z) const {
  return z.dim() == dim() && z.is_finite() && psi(z) > 0.0;
}

Point Domain::dpsi(const Point& z) const {
  if (auto g = dpsi_analytic(z)) return *g;
  return dpsi_finite_difference(z);
}

Point Domain::dpsi_finite_difference(const Point& z) const {
  const double h = 1e-6 * (1.0 + z.norm());
  Point g(z.dim());
  for (std::size_t j = 0; j < z.dim(); ++j) {
    Point a = z, b = z;
    a[j] += cplx{h, 0.0};
    b[j] -= cplx{h, 0.0};
    const double dx = (psi(a) - psi(b)) / (2.0 * h);
    a = z;
    b = z;
    a[j] += cplx{0.0, h};
    b[j] -= cplx{0.0, h};
    const double dy = (psi(a) - psi(b)) / (2.0 * h);
    g[j] = cplx{0.5 * dx, -0.5 * dy};
  }
  return g;
}

Point Domain::nearest_boundary(const Point& z) const { return nearest_boundary_search(z); }

Point Domain::nearest_boundary_search(const Point& z) const {
  if (!contains(z)) throw DomainError("nearest_boundary needs an interior point");
  const std::size_t n = dim();
  const double tmax = 2.0 * bounding_radius() + z.norm();

  auto exit_time = [&](const Point& u) {
    double lo = 0.0, hi = tmax;
    for (int it = 0; it < kBisectionSteps; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (psi(z + u * cplx{mid, 0.0}) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  std::vector<Point> starts;
  for (std::size_t j = 0; j < n; ++j) {
    for (cplx e : {cplx{1, 0}, cplx{-1, 0}, cplx{0, 1}, cplx{0, -1}}) {
      Point u(n);
      u[j] = e;
      starts.push_back(u);
    }
  }
  CounterRng rng(kDirectionSeed, 0);
  for (std::size_t k = 0; k < kRandomDirections; ++k) starts.push_back(draw_unit_sphere(n, rng));

  Point best_u = starts.front();
  double best_t = std::numeric_limits<double>::infinity();
  for (const Point& u : starts) {
    const double t = exit_time(u);
    if (t < best_t) {
      best_t = t;
      best_u = u;
    }
  }

  Point u = best_u;
  double t = best_t;
  for (int it = 0; it < 400; ++it) {
    const Point b = z + u * cplx{t, 0.0};
    const Point g = real_gradient(*this, b);
    if (g.norm2() == 0.0) break;
    const Point outward = normalized(-g);
    const Point next = normalized(u + (outward - u) * cplx{0.5, 0.0});
    const double step = distance(next, u);
    u = next;
    t = exit_time(u);
    if (t < best_t) {
      best_t = t;
      best_u = u;
    }
    if (step < 1e-13) break;
  }
  return z + best_u * cplx{best_t, 0.0};
}

double Domain::boundary_distance(const Point& z) const {
  if (!contains(z)) throw DomainError("boundary_distance needs an interior point");
  return distance(z, nearest_boundary(z));
}

// ---------------------------------------------------------------- unit ball

UnitBallDomain::UnitBallDomain(std::size_t n) : n_(n) {
  if (n == 0) throw ParameterError("dimension must be positive");
}

double UnitBallDomain::psi(const Point& z) const { return 1.0 - z.norm2(); }

std::optional<Point> UnitBallDomain::dpsi_analytic(const Point& z) const {
  Point g(z.dim());
  for (std::size_t j = 0; j < z.dim(); ++j) g[j] = -std::conj(z[j]);
  return g;
}

std::optional<EuclideanBall> UnitBallDomain::known_inscribed_ball() const {
  return EuclideanBall{Point(n_), 1.0};
}

Point UnitBallDomain::nearest_boundary(const Point& z) const {
  if (!contains(z)) throw DomainError("nearest_boundary needs an interior point");
  const double r = z.norm();
  if (r == 0.0) return Point::basis(n_, 0);
  return z * cplx{1.0 / r, 0.0};
}

double UnitBallDomain::boundary_distance(const Point& z) const {
  if (!contains(z)) throw DomainError("boundary_distance needs an interior point");
  return 1.0 - z.norm();
}

nlohmann::json UnitBallDomain::to_json() const { return {{"type", "ball"}, {"n", n_}}; }

// ---------------------------------------------------------------- ellipsoid

EllipsoidDomain::EllipsoidDomain(std::vector<double> semi_axes) : axes_(std::move(semi_axes)) {
  if (axes_.empty() || axes_.size() % 2 != 0) {
    throw ParameterError("ellipsoid needs 2n semi-axes");
  }
  for (double a : axes_) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("semi-axes must be positive");
  }
}

double EllipsoidDomain::psi(const Point& z) const {
  double s = 1.0;
  for (std::size_t j = 0; j < dim(); ++j) {
    const double x = z[j].real() / axes_[2 * j];
    const double y = z[j].imag() / axes_[2 * j + 1];
    s -= x * x + y * y;
  }
  return s;
}

std::optional<Point> EllipsoidDomain::dpsi_analytic(const Point& z) const {
  Point g(z.dim());
  for (std::size_t j = 0; j < z.dim(); ++j) {
    const double a = axes_[2 * j], b = axes_[2 * j + 1];
    g[j] = cplx{-z[j].real() / (a * a), z[j].imag() / (b * b)};
  }
  return g;
}

double EllipsoidDomain::bounding_radius() const {
  return *std::max_element(axes_.begin(), axes_.end());
}

double EllipsoidDomain::inner_radius() const {
  const double lo = *std::min_element(axes_.begin(), axes_.end());
  return lo * lo / bounding_radius();
}

std::optional<EuclideanBall> EllipsoidDomain::known_inscribed_ball() const {
  return EuclideanBall{Point(dim()), *std::min_element(axes_.begin(), axes_.end())};
}

Point EllipsoidDomain::nearest_boundary(const Point& z) const {
  if (!contains(z)) throw DomainError("nearest_boundary needs an interior point");
  const std::vector<double> p = z.to_real();
  const std::size_t m = p.size();
  double s2min = std::numeric_limits<double>::infinity();
  for (double a : axes_) s2min = std::min(s2min, a * a);

  // Minimizer q_i = p_i s_i^2 / (s_i^2 - lambda), lambda in [0, s_min^2).
  double pmin2 = 0.0, F_edge = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double s2 = axes_[i] * axes_[i];
    if (s2 == s2min) {
      pmin2 += p[i] * p[i];
    } else {
      const double q = p[i] * s2 / (s2 - s2min);
      F_edge += q * q / s2;
    }
  }
  std::vector<double> q(m, 0.0);
  if (pmin2 == 0.0 && F_edge <= 1.0) {
    bool placed = false;
    for (std::size_t i = 0; i < m; ++i) {
      const double s2 = axes_[i] * axes_[i];
      if (s2 != s2min) {
        q[i] = p[i] * s2 / (s2 - s2min);
      } else if (!placed) {
        q[i] = std::sqrt(std::max(0.0, s2min * (1.0 - F_edge)));
        placed = true;
      }
    }
    return Point::from_real(q);
  }
  auto F = [&](double lambda) {
    double s = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double s2 = axes_[i] * axes_[i];
      const double qi = p[i] * s2 / (s2 - lambda);
      s += qi * qi / s2;
    }
    return s;
  };
  double lo = 0.0, hi = s2min;
  for (int it = 0; it < 200 && hi > lo; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (F(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double lambda = 0.5 * (lo + hi);
  for (std::size_t i = 0; i < m; ++i) {
    const double s2 = axes_[i] * axes_[i];
    q[i] = p[i] * s2 / (s2 - lambda);
  }
  return Point::from_real(q);
}

nlohmann::json EllipsoidDomain::to_json() const {
  return {{"type", "ellipsoid"}, {"semi_axes", axes_}};
}

// ---------------------------------------------------------- perturbed ball

PerturbedBallDomain::PerturbedBallDomain(std::size_t n, double eps, Point bump_center,
                                         double sigma, double inner_radius)
    : n_(n), eps_(eps), bump_(std::move(bump_center)), sigma_(sigma), inner_(inner_radius) {
  if (n == 0) throw ParameterError("dimension must be positive");
  if (bump_.dim() != n) throw ParameterError("bump center dimension mismatch");
  if (!(eps >= 0.0) || !(sigma > 0.0)) throw ParameterError("need eps >= 0 and sigma > 0");
  if (!(inner_radius > 0.0 && inner_radius <= 1.0)) {
    throw ParameterError("inner radius must lie in (0,1]");
  }
}

double PerturbedBallDomain::psi(const Point& z) const {
  return 1.0 - z.norm2() - eps_ * std::exp(-(z - bump_).norm2() / (sigma_ * sigma_));
}

std::optional<Point> PerturbedBallDomain::dpsi_analytic(const Point& z) const {
  const double e = eps_ * std::exp(-(z - bump_).norm2() / (sigma_ * sigma_)) / (sigma_ * sigma_);
  Point g(z.dim());
  for (std::size_t j = 0; j < z.dim(); ++j) {
    g[j] = -std::conj(z[j]) + e * std::conj(z[j] - bump_[j]);
  }
  return g;
}

nlohmann::json PerturbedBallDomain::to_json() const {
  return {{"type", "perturbed_ball"}, {"n", n_},         {"eps", eps_},
          {"center", bump_.to_real()},   {"sigma", sigma_}, {"inner_radius", inner_}};
}

std::unique_ptr<Domain> domain_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type")) {
    throw ValidationError("domain must be an object with a 'type'");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "ball") {
    check_keys(j, {"type", "n"});
    return std::make_unique<UnitBallDomain>(j.value("n", std::size_t{1}));
  }
  if (type == "ellipsoid") {
    check_keys(j, {"type", "semi_axes"});
    return std::make_unique<EllipsoidDomain>(j.at("semi_axes").get<std::vector<double>>());
  }
  if (type == "perturbed_ball") {
    check_keys(j, {"type", "n", "eps", "center", "sigma", "inner_radius"});
    const std::size_t n = j.value("n", std::size_t{1});
    Point c = j.contains("center") ? point_from_json(j.at("center")) : Point::basis(n, 0, 1.0);
    return std::make_unique<PerturbedBallDomain>(n, j.value("eps", 0.05), std::move(c),
                                                 j.value("sigma", 0.3),
                                                 j.value("inner_radius", 0.5));
  }
  throw ValidationError("unknown domain type '" + type + "'");
}

// ---------------------------------------------------------------- services

EuclideanBall tangent_inscribed_ball(const Domain& D, const Point& z0) {
  if (dynamic_cast<const UnitBallDomain*>(&D)) {
    if (!D.contains(z0)) throw DomainError("point outside the domain");
    return EuclideanBall{Point(D.dim()), 1.0};
  }
  const Point x = D.nearest_boundary(z0);
  const double d = distance(z0, x);
  const double delta = D.inner_radius();
  if (d >= delta) return EuclideanBall{z0, d};
  return EuclideanBall{x + (z0 - x) * cplx{delta / d, 0.0}, delta};
}

std::vector<Point> sample_inner_kobayashi_ball(const Domain& D, const Point& z0, double r,
                                               std::size_t count, std::uint64_t seed) {
  const EuclideanBall B = tangent_inscribed_ball(D, z0);
  const Point u0 = (z0 - B.center) * cplx{1.0 / B.radius, 0.0};
  std::vector<Point> out = sample_ball_uniform(kobayashi_ball(u0, r), count, seed);
  for (Point& p : out) p = B.center + p * cplx{B.radius, 0.0};
  return out;
}

double kobayashi_in_ball(const EuclideanBall& B, const Point& z, const Point& w) {
  const cplx s{1.0 / B.radius, 0.0};
  const Point a = (z - B.center) * s;
  const Point b = (w - B.center) * s;
  if (a.norm2() >= 1.0 || b.norm2() >= 1.0) return std::numeric_limits<double>::infinity();
  return std::atanh(pseudo_unchecked(a, b));
}

DistanceBounds kobayashi_bounds(const Domain& D, const Point& z, const Point& w) {
  if (!D.contains(z) || !D.contains(w)) throw DomainError("points must be interior");
  DistanceBounds out;
  out.lower = kobayashi_in_ball(EuclideanBall{Point(D.dim()), D.bounding_radius()}, z, w);
  out.upper = std::numeric_limits<double>::infinity();

  auto offer = [&](double value, const char* method) {
    if (value < out.upper) {
      out.upper = value;
      out.upper_method = method;
    }
  };
  if (auto B = D.known_inscribed_ball()) offer(kobayashi_in_ball(*B, z, w), "inscribed");
  const Point mid = (z + w) * cplx{0.5, 0.0};
  offer(kobayashi_in_ball(EuclideanBall{mid, D.boundary_distance(mid)}, z, w), "midpoint");

  const double len = distance(z, w);
  if (len > 0.0) {
    const Point u = (w - z) * cplx{1.0 / len, 0.0};
    const double alpha = 0.5;
    Point p = z;
    double total = 0.0;
    for (int step = 0; step < 100000; ++step) {
      const double dp = D.boundary_distance(p);
      const double rest = distance(p, w);
      if (rest < dp) {
        offer(total + std::atanh(rest / dp), "chain");
        break;
      }
      total += std::atanh(alpha);
      p = p + u * cplx{alpha * dp, 0.0};
    }
  } else {
    offer(0.0, "identical");
  }
  out.upper_found = std::isfinite(out.upper);
  if (out.upper_found) out.upper = std::max(out.upper, out.lower);
  return out;
}

BoundaryEstimate estimate_boundary_constants(const Domain& D, const Point& z0,
                                             const std::vector<Point>& probes) {
  if (probes.size() < 2) throw ParameterError("need at least 2 probes");
  BoundaryEstimate e{std::numeric_limits<double>::infinity(),
                     -std::numeric_limits<double>::infinity()};
  for (const Point& p : probes) {
    const DistanceBounds b = kobayashi_bounds(D, z0, p);
    const double half_log_d = 0.5 * std::log(D.boundary_distance(p));
    e.c0 = std::min(e.c0, b.lower + half_log_d);
    e.C0 = std::max(e.C0, b.upper + half_log_d);
  }
  return e;
}

CheckReport check_distance_comparison(const Domain& D, const Point& z0, double r,
                                      std::size_t samples, std::uint64_t seed) {
  const double d0 = D.boundary_distance(z0);
  double C2 = 0.0;
  for (const Point& z : sample_inner_kobayashi_ball(D, z0, r, samples, seed)) {
    const double d = D.boundary_distance(z);
    C2 = std::max(C2, (1.0 - r) * std::max(d0 / d, d / d0));
  }
  CheckReport rep;
  rep.check = "distance_comparison";
  rep.statistic = C2;
  rep.bound = 4.0;
  rep.verdict = C2 <= 4.0 ? Verdict::pass : Verdict::fail;
  rep.n_samples = samples;
  rep.seed = seed;
  rep.details = {{"domain", D.type()}, {"d0", d0}, {"r", r}};
  return rep;
}

namespace {

double defining_fn_constant(const Domain& D, const Point& z0, double r, std::size_t samples,
                            std::uint64_t seed) {
  const double d0 = D.boundary_distance(z0);
  const Point g = D.dpsi(z0);
  if (!g.is_finite()) throw AnalysisError("defining function gradient is not finite");
  double c = std::numeric_limits<double>::infinity();
  for (const Point& z : sample_inner_kobayashi_ball(D, z0, r, samples, seed)) {
    const Point v = z - z0;
    cplx dv{0.0, 0.0};
    for (std::size_t j = 0; j < v.dim(); ++j) dv += g[j] * v[j];
    const double rhs = v.norm2() + std::abs(dv);
    if (rhs > 0.0) c = std::min(c, d0 / rhs);
  }
  return c;
}

}  // namespace

CheckReport check_defining_fn_inequality(const Domain& D, const Point& z0, double r,
                                         std::size_t samples, std::uint64_t seed) {
  const double c = defining_fn_constant(D, z0, r, samples, seed);
  CheckReport rep;
  rep.check = "defining_fn_inequality";
  rep.statistic = c;
  // In the ball, 1-|z0|^2 <= 2 d(z0) turns the ball inequality into c >= (1-r^2)/8.
  const bool is_ball = dynamic_cast<const UnitBallDomain*>(&D) != nullptr;
  rep.bound = is_ball ? (1.0 - r * r) / 8.0 : 0.0;
  rep.verdict = std::isfinite(c) && c > rep.bound ? Verdict::pass : Verdict::fail;
  rep.n_samples = samples;
  rep.seed = seed;
  rep.details = {{"domain", D.type()}, {"r", r}};
  return rep;
}

CheckReport check_defining_fn_scaling(const Domain& D, const Point& z0,
                                      const std::vector<double>& radii, std::size_t samples,
                                      std::uint64_t seed) {
  if (radii.empty()) throw ParameterError("need at least one radius");
  std::vector<double> cs;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double c = defining_fn_constant(D, z0, radii[i], samples, derive_seed(seed, i));
    cs.push_back(c);
  }
  double c2 = std::numeric_limits<double>::infinity();
  double worst = 1.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double q = cs[i] / (1.0 - radii[i] * radii[i]);
    c2 = std::min(c2, q);
    if (i > 0) worst = std::max(worst, cs[i - 1] / (1.0 - radii[i - 1] * radii[i - 1]) / q);
  }
  CheckReport rep;
  rep.check = "defining_fn_scaling";
  rep.statistic = worst;
  rep.bound = 2.0;
  rep.verdict = worst <= 2.0 ? Verdict::pass : Verdict::fail;
  rep.n_samples = samples * radii.size();
  rep.seed = seed;
  rep.details = {{"c2", c2}, {"c2_r", cs}, {"radii", radii}};
  return rep;
}

}  // namespace carleson
