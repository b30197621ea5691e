#pragma once

// Eisenman-Kobayashi density of B^n, which under nu(B^n) = 1 is
// (1-|z|^2)^{-(n+1)}, the reciprocal real Jacobian at 0 of the automorphism
// exchanging 0 and z. The induced measure of a Kobayashi ball depends only on
// its radius: kappa(B(z0, r)) = (r^2 / (1 - r^2))^n.

#include <cstdint>
#include <functional>
#include <vector>

#include "carleson/integrate.hpp"
#include "carleson/point.hpp"
#include "carleson/report.hpp"

namespace carleson {

enum class EKBackend {
  bergman,            ///< (1-|z|^2)^{-(n+1)}
  boundary_distance,  ///< d(z)^{-(n+1)}, the comparable alternative
};

/// Throws DomainError outside B^n and when the value overflows.
double ek_density(const Point& z, EKBackend backend = EKBackend::bergman);

/// MC integral of ek_density over the ellipsoid B(z0, r).
EstimateWithError ek_ball_measure(const Point& z0, double r, const MCConfig& mc,
                                  EKBackend backend = EKBackend::bergman);

/// (r^2 / (1 - r^2))^n.
double ek_ball_measure_exact(std::size_t n, double r);

/// MC value of kappa(B(0, r)) against the closed form, within 3 sigma.
CheckReport check_ek_exact(std::size_t n, double r, const MCConfig& mc);

/// kappa(B(z0, r)) against kappa(B(phi_a(z0), r)) for random a; the
/// statistic is the largest difference in combined standard errors (<= 3).
CheckReport check_ek_invariance(const Point& z0, double r, std::size_t trials,
                                const MCConfig& mc);

/// Two-sided bound c r^{2n} (1-r)^{n+1} <= kappa(B(z0,r)) <= C / (d^n (1-r)^n)
/// over the grid. For each z0 the tightest constants over r are fitted; the
/// check passes when neither constant drifts by 10x or more across z0 (c
/// measured by max/min, C by its growth relative to the first z0), and is
/// inconclusive when some MC error exceeds 10% of the fitted lower bound.
CheckReport check_ek_two_sided(std::size_t n, const std::vector<double>& z0_radii,
                               const std::vector<double>& radii, const MCConfig& mc);

/// Competitor maps f = phi_a(lambda z), lambda in (1/2, 1]: 1/|Jac_R f(0)|,
/// from a finite-difference Jacobian, must dominate ek_density(f(0)). The
/// statistic is the smallest ratio; passes when >= 1 - 1e-5.
CheckReport check_ek_inf_property(std::size_t n, std::size_t samples, std::uint64_t seed);

/// 2^{-(n+1)} <= K(z) d(z)^{n+1} <= 1 on the radial grid t e_1.
CheckReport check_ek_sandwich(std::size_t n, const std::vector<double>& radii);

/// Determinant of a square row-major matrix (partial pivoting).
double determinant(std::vector<double> a, std::size_t m);

/// Real Jacobian determinant at u of a map C^n -> C^n, central differences.
double real_jacobian_det(const std::function<Point(const Point&)>& f, const Point& u,
                         double h = 1e-6);

}  // namespace carleson
