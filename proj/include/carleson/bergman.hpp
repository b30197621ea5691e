#pragma once

// Bergman kernel of B^n under nu(B^n) = 1: K(z,w) = (1 - <z,w>)^{-(n+1)}.

#include <cstdint>
#include <functional>
#include <vector>

#include "carleson/integrate.hpp"
#include "carleson/measure.hpp"
#include "carleson/point.hpp"
#include "carleson/report.hpp"

namespace carleson {

using KernelFn = std::function<cplx(const Point&, const Point&)>;

/// Throws DomainError off the ball or when |1 - <z,w>| is too small to raise
/// to the power n+1 without overflow.
cplx kernel(const Point& z, const Point& w);

/// k_{z0}(z) = K(z, z0) / sqrt(K(z0, z0)).
cplx normalized_kernel(const Point& z0, const Point& z);

/// |k_{z0}(z)|^2 = (1-|z0|^2)^{n+1} / |1 - <z,z0>|^{2(n+1)}.
double normalized_kernel_sq(const Point& z0, const Point& z);

/// |k_z(a)|^2 for an atom, using its stored boundary distance.
double normalized_kernel_sq_atom(const Point& z, const Atom& a);

/// B mu(z). Atoms are summed exactly; densities are pulled back through the
/// automorphism phi_z, which turns |k_z|^2 dnu into dnu, and integrated with
/// radial importance sampling matched to the density exponent.
EstimateWithError berezin_transform(const Measure& mu, const Point& z, const MCConfig& mc);

/// The same integral of |k_z|^2 against mu, with |k_z|^2 evaluated at every
/// sample. Samples come from a mixture of a boundary-weighted radial law, its
/// image under phi_z and nested Kobayashi ellipsoids around z; each sample is
/// weighted by the full mixture density.
EstimateWithError kernel_mass_direct(const Measure& mu, const Point& z, const MCConfig& mc);

/// Gauss series 2F1(a, b; c; x) on [0, 1], Gauss's value at x = 1.
double hypergeometric_2f1(double a, double b, double c, double x);

/// int |k_z|^2 (1-|u|^2)^s dnu with x = |z|^2, in closed form:
///   Gamma(n+1) Gamma(s+1) / Gamma(n+1+s) (1-x)^s 2F1(s, s; n+1+s; x).
double berezin_power_density(std::size_t n, double s, double x);

/// B mu(z) without sampling: atoms summed, power densities in closed form.
double kernel_mass_exact(const Measure& mu, const Point& z);

/// Holomorphic polynomial sum_alpha c_alpha z^alpha.
struct Polynomial {
  struct Term {
    std::vector<int> alpha;
    cplx coeff;
  };
  std::size_t n = 1;
  std::vector<Term> terms;

  cplx operator()(const Point& z) const;
  /// Squared A^2 norm; monomials are orthogonal with
  /// ||z^alpha||^2 = alpha! n! / (n + |alpha|)!.
  double norm2() const;
  /// int |P|^2 (1-|z|^2)^s dnu, also diagonal in the monomials.
  double weighted_norm2(double s) const;
  std::size_t degree() const;

  static Polynomial monomial(std::size_t n, std::vector<int> alpha);
  /// Random complex Gaussian coefficients on all monomials of degree <= d.
  static Polynomial random(std::size_t n, int degree, std::uint64_t seed);
};

/// All multi-indices of length n with |alpha| <= degree, graded order.
std::vector<std::vector<int>> multi_indices(std::size_t n, int degree);

/// Monomial norm ||z^alpha||_2^2.
double monomial_norm2(const std::vector<int>& alpha);

/// int K(z, zeta) zeta^alpha dnu(zeta) = z^alpha: real and imaginary parts
/// must each agree within 3 standard errors.
CheckReport check_reproducing(const Point& z, const std::vector<int>& alpha, const MCConfig& mc,
                              const KernelFn& K = kernel);

/// int |K(z, zeta)|^2 dnu(zeta) = K(z, z) within 3 standard errors.
CheckReport check_diagonal_identity(const Point& z, const MCConfig& mc);

/// sup of K(z,z) d(z)^{n+1} over the radial grid t e_1; passes when <= 1.
/// Also records the largest deviation from (1 + |z|)^{-(n+1)}.
CheckReport check_kernel_upper(std::size_t n, const std::vector<double>& radii);

/// min over samples z in B(z0, r) of |k_{z0}(z)|^2 d(z0)^{n+1}; passes with
/// zero violations of ((1-r)^2 (1+r) / 16)^{n+1}.
CheckReport check_kernel_lower(const std::vector<Point>& centers, double r, std::size_t samples,
                               std::uint64_t seed);

/// Submean inequality in the ball with chi = |f|^2:
///   chi(z0) <= 4^{n+1} / (r^{2n} d^{n+1}) int_{B(z0,r)} chi dnu.
/// Inconclusive when the MC error exceeds 10% of the slack. Details carry the
/// fitted constants chi(z0) nu(B) / int_B chi and
/// max_{z in B(z0,r)} chi(z) nu(B(z0,r)) / int_{B(z0,R)} chi, R = (1+r)/2.
CheckReport check_submean(const Polynomial& f, const Point& z0, double r, const MCConfig& mc);

}  // namespace carleson
