#include "carleson/integrate.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "carleson/errors.hpp"

namespace carleson {

void apply_thread_cap_from_env() {
  if (const char* env = std::getenv("CARLESON_LAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) omp_set_num_threads(std::min(cap, omp_get_num_procs()));
  }
}

int worker_count() { return omp_get_max_threads(); }

void MCConfig::validate() const {
  if (n_samples < 100) {
    throw ParameterError("MC error bars need n_samples >= 100");
  }
  if (substreams == 0) throw ParameterError("substreams must be positive");
  if (strata <= 0) throw ParameterError("strata must be positive");
  if (!(pole_order >= 0.0)) throw ParameterError("pole_order must be >= 0");
}

MCConfig MCConfig::with_label(std::uint64_t label) const {
  MCConfig c = *this;
  c.seed = derive_seed(seed, label);
  return c;
}

bool EstimateWithError::within(double truth, double k) const {
  return std::abs(value - truth) <= k * std_error;
}

Ellipsoid Ellipsoid::unit_ball(std::size_t n) { return round(Point(n), 1.0); }

Ellipsoid Ellipsoid::round(Point center, double radius) {
  Ellipsoid e;
  e.axis = Point(center.dim());
  e.center = std::move(center);
  e.radial = radius;
  e.transverse = radius;
  return e;
}

Point Ellipsoid::map(const Point& u) const {
  Point z = center;
  if (axis.norm2() == 0.0 || radial == transverse) {
    for (std::size_t j = 0; j < z.dim(); ++j) z[j] += transverse * u[j];
    return z;
  }
  const cplx along = inner(u, axis);
  for (std::size_t j = 0; j < z.dim(); ++j) {
    const cplx par = along * axis[j];
    z[j] += radial * par + transverse * (u[j] - par);
  }
  return z;
}

double Ellipsoid::level(const Point& z) const {
  const Point v = z - center;
  if (axis.norm2() == 0.0) return v.norm2() / (transverse * transverse);
  const cplx along = inner(v, axis);
  const double par2 = std::norm(along);
  const double perp2 = std::max(0.0, v.norm2() - par2);
  return par2 / (radial * radial) + perp2 / (transverse * transverse);
}

double Ellipsoid::volume() const {
  const double n = static_cast<double>(dim());
  return radial * radial * std::pow(transverse, 2.0 * (n - 1.0));
}

Point draw_unit_sphere(std::size_t n, CounterRng& rng) {
  Point p(n);
  double s = 0.0;
  do {
    for (std::size_t j = 0; j < n; ++j) p[j] = cplx{rng.normal(), rng.normal()};
    s = p.norm2();
  } while (s == 0.0);
  p *= cplx{1.0 / std::sqrt(s), 0.0};
  return p;
}

Point draw_unit_ball(std::size_t n, CounterRng& rng) {
  Point p = draw_unit_sphere(n, rng);
  const double t = std::pow(rng.uniform(), 1.0 / (2.0 * static_cast<double>(n)));
  p *= cplx{t, 0.0};
  return p;
}

std::vector<Point> sample_unit_ball(std::size_t n, std::size_t count, std::uint64_t seed) {
  if (n == 0) throw ParameterError("dimension must be positive");
  CounterRng rng(seed, 0);
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(draw_unit_ball(n, rng));
  return out;
}

namespace {

struct Shells {
  std::vector<double> radius;  // boundaries in |u|, size strata + 1
  std::vector<double> weight;  // normalized volume fraction of each shell
  std::vector<std::size_t> alloc;
};

Shells make_shells(std::size_t n, const MCConfig& cfg) {
  const int S = cfg.strata;
  const double two_n = 2.0 * static_cast<double>(n);
  Shells sh;
  sh.radius.resize(S + 1);
  sh.radius[0] = 0.0;
  sh.radius[S] = 1.0;
  for (int k = 1; k < S; ++k) {
    sh.radius[k] = cfg.pole_order > 0.0 ? 1.0 - std::ldexp(1.0, -k)
                                        : std::pow(static_cast<double>(k) / S, 1.0 / two_n);
  }
  sh.weight.resize(S);
  for (int k = 0; k < S; ++k) {
    sh.weight[k] = std::pow(sh.radius[k + 1], two_n) - std::pow(sh.radius[k], two_n);
  }
  // Equal allocation: proportional for equal-volume shells, boundary-heavy
  // for geometric ones.
  sh.alloc.assign(S, cfg.n_samples / S);
  for (std::size_t k = 0; k < cfg.n_samples % S; ++k) sh.alloc[k] += 1;
  return sh;
}

}  // namespace

EstimateWithError integrate_density(const Integrand& f, const Ellipsoid& region,
                                    const MCConfig& cfg) {
  cfg.validate();
  const std::size_t n = region.dim();
  if (n == 0) throw ParameterError("region dimension must be positive");
  const Shells sh = make_shells(n, cfg);
  const std::size_t S = sh.alloc.size();
  const std::size_t sub = cfg.substreams;
  const double two_n = 2.0 * static_cast<double>(n);

  auto task = [&](std::size_t id) {
    const std::size_t k = id / sub;
    const std::size_t j = id % sub;
    const std::size_t per = sh.alloc[k] / sub + (j < sh.alloc[k] % sub ? 1 : 0);
    CounterRng rng(cfg.seed, id);
    const double lo = std::pow(sh.radius[k], two_n);
    const double hi = std::pow(sh.radius[k + 1], two_n);
    Accumulator acc;
    for (std::size_t i = 0; i < per; ++i) {
      Point u = draw_unit_sphere(n, rng);
      const double t = std::pow(lo + rng.uniform() * (hi - lo), 1.0 / two_n);
      u *= cplx{t, 0.0};
      acc.add(f(region.map(u)));
    }
    return acc;
  };
  const auto parts = map_indexed<Accumulator>(S * sub, task, cfg.exec);

  const double vol = region.volume();
  EstimateWithError est;
  double var = 0.0;
  std::size_t excluded = 0;
  for (std::size_t k = 0; k < S; ++k) {
    Accumulator stratum;
    for (std::size_t j = 0; j < sub; ++j) stratum.merge(parts[k * sub + j]);
    excluded += stratum.excluded;
    if (stratum.count == 0) throw AnalysisError("empty stratum in integrate_density");
    const double w = vol * sh.weight[k];
    est.value += w * stratum.mean;
    var += w * w * stratum.variance() / static_cast<double>(stratum.count);
    est.n_effective += stratum.count;
  }
  if (excluded > 0 &&
      static_cast<double>(excluded) > 1e-4 * static_cast<double>(cfg.n_samples)) {
    throw AnalysisError("integrand non-finite at " + std::to_string(excluded) + " of " +
                        std::to_string(cfg.n_samples) + " samples");
  }
  est.n_excluded = excluded;
  est.std_error = std::sqrt(var);
  return est;
}

EstimateWithError integrate_unit_ball_weighted(const Integrand& f, std::size_t n, double beta,
                                               const MCConfig& cfg) {
  cfg.validate();
  if (n == 0) throw ParameterError("dimension must be positive");
  if (!(beta > -1.0)) throw ParameterError("boundary exponent must exceed -1");
  const std::size_t S = static_cast<std::size_t>(cfg.strata);
  const std::size_t sub = cfg.substreams;
  const double dn = static_cast<double>(n);
  std::vector<std::size_t> alloc(S, cfg.n_samples / S);
  for (std::size_t k = 0; k < cfg.n_samples % S; ++k) alloc[k] += 1;

  auto task = [&](std::size_t id) {
    const std::size_t k = id / sub;
    const std::size_t j = id % sub;
    const std::size_t per = alloc[k] / sub + (j < alloc[k] % sub ? 1 : 0);
    CounterRng rng(cfg.seed, id);
    const double lo = static_cast<double>(k) / static_cast<double>(S);
    const double width = 1.0 / static_cast<double>(S);
    Accumulator acc;
    for (std::size_t i = 0; i < per; ++i) {
      Point u = draw_unit_sphere(n, rng);
      const double v = lo + rng.uniform() * width;
      const double gap = std::pow(v, 1.0 / (beta + 1.0));  // 1 - t
      const double t = 1.0 - gap;
      u *= cplx{std::sqrt(t), 0.0};
      const double w = dn * std::pow(t, dn - 1.0) / ((beta + 1.0) * std::pow(gap, beta));
      acc.add(f(u) * w);
    }
    return acc;
  };
  const auto parts = map_indexed<Accumulator>(S * sub, task, cfg.exec);

  EstimateWithError est;
  double var = 0.0;
  std::size_t excluded = 0;
  for (std::size_t k = 0; k < S; ++k) {
    Accumulator stratum;
    for (std::size_t j = 0; j < sub; ++j) stratum.merge(parts[k * sub + j]);
    excluded += stratum.excluded;
    if (stratum.count == 0) throw AnalysisError("empty stratum in integrate_unit_ball_weighted");
    const double w = 1.0 / static_cast<double>(S);
    est.value += w * stratum.mean;
    var += w * w * stratum.variance() / static_cast<double>(stratum.count);
    est.n_effective += stratum.count;
  }
  if (excluded > 0 &&
      static_cast<double>(excluded) > 1e-4 * static_cast<double>(cfg.n_samples)) {
    throw AnalysisError("integrand non-finite at " + std::to_string(excluded) + " of " +
                        std::to_string(cfg.n_samples) + " samples");
  }
  est.n_excluded = excluded;
  est.std_error = std::sqrt(var);
  return est;
}

}  // namespace carleson
