#pragma once

// Invariant geometry of the unit ball B^n: pseudohyperbolic and Kobayashi
// distances, the involutive automorphisms, and Kobayashi balls, which in B^n
// are explicit Euclidean ellipsoids. Volumes are normalized so nu(B^n) = 1.

#include <cstdint>
#include <vector>

#include "carleson/integrate.hpp"
#include "carleson/point.hpp"
#include "carleson/report.hpp"

namespace carleson {

/// Throws DomainError unless |z| < 1.
void require_in_ball(const Point& z, const char* what);

struct DistancePair {
  double pseudo = 0.0;     ///< rho in [0, 1)
  double kobayashi = 0.0;  ///< arctanh(rho)
};

/// rho(z,w)^2 = 1 - (1-|z|^2)(1-|w|^2)/|1-<z,w>|^2, evaluated through the
/// equivalent form (|z-w|^2 - |z ^ (w-z)|^2)/|1-<z,w>|^2, which keeps full
/// relative accuracy for nearby points.
DistancePair pseudo_distance(const Point& z, const Point& w);

/// rho only; no validation of inputs (hot loops).
double pseudo_unchecked(const Point& z, const Point& w);

double kobayashi_distance(const Point& z, const Point& w);

/// Involutive automorphism phi_a with phi_a(0) = a and phi_a(phi_a(z)) = z:
///   phi_a(z) = (a - P_a z - sqrt(1-|a|^2) Q_a z) / (1 - <z,a>),
/// P_a the orthogonal projection on C a and Q_a = I - P_a. phi_0(z) = -z.
Point ball_automorphism(const Point& a, const Point& z);

/// The Kobayashi ball {z : rho(base, z) < pseudo_radius}. In B^n this is an
/// ellipsoid with the stored center and axes.
struct KobayashiBall {
  Point base;
  double pseudo_radius = 0.0;
  Point center;
  double radial_axis = 0.0;      ///< semi-axis on the complex line C base
  double transverse_axis = 0.0;  ///< semi-axis orthogonal to base

  /// Membership by the metric definition.
  bool contains(const Point& z) const;
  /// Membership by the ellipsoid equation.
  bool ellipsoid_contains(const Point& z) const;
  Ellipsoid ellipsoid() const;
  double volume() const;
};

KobayashiBall kobayashi_ball(const Point& z0, double r);

/// nu(B(z0, r)) = r^{2n} ((1-|z0|^2)/(1-r^2|z0|^2))^{n+1}.
double ball_volume(const Point& z0, double r);

/// Uniform samples from the ellipsoid (exact, rejection free).
std::vector<Point> sample_ball_uniform(const KobayashiBall& ball, std::size_t count,
                                       std::uint64_t seed);

/// 1-|z0|^2 > (1-r^2)/4 (|z-z0|^2 + |<z-z0,z0>|) on B(z0, r). The statistic is
/// the smallest slack over uniform samples; passes iff it is positive.
CheckReport check_lemma_ball_inequality(const Point& z0, double r, std::size_t samples,
                                        std::uint64_t seed);

/// Volume sandwich in the ball: for every (z0, r) on the grid,
///   c1 r^{2n} d^{n+1} <= nu(B(z0,r)) <= C1 r^{2n} (1-r^2)^{-(n+1)} d^{n+1},
/// d = 1-|z0|. Reports the fitted c1 (statistic) and C1 (details); passes
/// when c1 >= 1 and C1 <= 2^{n+1}.
CheckReport check_volume_sandwich(std::size_t n, const std::vector<double>& radii_z0,
                                  const std::vector<double>& radii_r);

}  // namespace carleson
