#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "carleson/kernels.hpp"
#include "carleson/point.hpp"
#include "carleson/rng.hpp"

namespace carleson {

/// Monte-Carlo configuration. Results are a pure function of
/// (seed, n_samples, substreams, strata, pole_order); the thread count and
/// `exec` never change a result.
struct MCConfig {
  std::uint64_t seed = 1;
  std::size_t n_samples = 100000;
  std::size_t substreams = 64;
  int strata = 8;
  /// > 0 declares that the integrand blows up towards the region boundary;
  /// strata then become geometric shells that crowd the boundary.
  double pole_order = 0.0;
  Exec exec = Exec::parallel;

  void validate() const;
  /// Same configuration with a seed derived from `label`.
  MCConfig with_label(std::uint64_t label) const;
};

struct EstimateWithError {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_effective = 0;
  std::size_t n_excluded = 0;

  bool within(double truth, double k = 3.0) const;
};

/// Euclidean ellipsoid with at most one distinguished complex direction:
/// semi-axis `radial` on the complex line spanned by `axis`, `transverse`
/// on its orthogonal complement. A zero `axis` means a round ball.
struct Ellipsoid {
  Point center;
  Point axis;
  double radial = 1.0;
  double transverse = 1.0;

  static Ellipsoid unit_ball(std::size_t n);
  static Ellipsoid round(Point center, double radius);

  std::size_t dim() const noexcept { return center.dim(); }
  /// Image of a point u of the unit ball.
  Point map(const Point& u) const;
  /// Quadratic form value; < 1 strictly inside.
  double level(const Point& z) const;
  bool contains(const Point& z) const { return level(z) < 1.0; }
  /// Volume normalized so that the unit ball has volume 1.
  double volume() const;
};

Point draw_unit_sphere(std::size_t n, CounterRng& rng);
Point draw_unit_ball(std::size_t n, CounterRng& rng);

/// `count` points uniform on B^n (with respect to normalized volume),
/// byte-identical for a fixed (n, count, seed).
std::vector<Point> sample_unit_ball(std::size_t n, std::size_t count, std::uint64_t seed);

using Integrand = std::function<double(const Point&)>;

/// Stratified Monte-Carlo estimate of the integral of f over `region` with
/// respect to normalized volume. Non-finite integrand values are dropped when
/// they are rarer than 0.01% of the samples; otherwise AnalysisError.
EstimateWithError integrate_density(const Integrand& f, const Ellipsoid& region,
                                    const MCConfig& cfg);

/// Integral of f over B^n for integrands that behave like (1-|u|^2)^beta at
/// the sphere (beta > -1): |u|^2 is drawn with density (beta+1)(1-t)^beta and
/// reweighted. beta = 0 is plain uniform sampling. Strata split the uniform
/// variate driving the radius.
EstimateWithError integrate_unit_ball_weighted(const Integrand& f, std::size_t n, double beta,
                                               const MCConfig& cfg);

}  // namespace carleson
