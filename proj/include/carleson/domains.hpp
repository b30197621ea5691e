#pragma once

// Bounded domains D = {psi > 0} given by a smooth defining function. The
// Kobayashi distance of a general domain is only ever reported as a pair of
// bounds obtained from inscribed and circumscribed Euclidean balls.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "carleson/point.hpp"
#include "carleson/report.hpp"

namespace carleson {

struct EuclideanBall {
  Point center;
  double radius = 0.0;
};

class Domain {
 public:
  virtual ~Domain() = default;

  virtual std::size_t dim() const = 0;
  virtual std::string type() const = 0;
  virtual double psi(const Point& z) const = 0;
  /// Complex derivatives d psi / d z_j when known in closed form.
  virtual std::optional<Point> dpsi_analytic(const Point& /*z*/) const { return std::nullopt; }
  /// Radius of a ball centered at the origin that contains D.
  virtual double bounding_radius() const = 0;
  /// Every Euclidean ball of this radius internally tangent to the boundary
  /// lies in D.
  virtual double inner_radius() const = 0;
  /// A large ball known to lie in D, if any.
  virtual std::optional<EuclideanBall> known_inscribed_ball() const { return std::nullopt; }
  /// Nearest boundary point to an interior z.
  virtual Point nearest_boundary(const Point& z) const;
  virtual nlohmann::json to_json() const = 0;

  bool contains(const Point& z) const;
  /// d psi / d z_j: analytic if available, else central differences with
  /// step 1e-6 (1 + |z|).
  Point dpsi(const Point& z) const;
  Point dpsi_finite_difference(const Point& z) const;
  /// Multi-start ray search with damped normal-alignment refinement. Valid
  /// for domains star-shaped about z.
  Point nearest_boundary_search(const Point& z) const;
  /// d(z, dD). Throws DomainError for exterior points.
  virtual double boundary_distance(const Point& z) const;
};

/// The unit ball, psi = 1 - |z|^2. All services are exact.
class UnitBallDomain final : public Domain {
 public:
  explicit UnitBallDomain(std::size_t n);
  std::size_t dim() const override { return n_; }
  std::string type() const override { return "ball"; }
  double psi(const Point& z) const override;
  std::optional<Point> dpsi_analytic(const Point& z) const override;
  double bounding_radius() const override { return 1.0; }
  double inner_radius() const override { return 1.0; }
  std::optional<EuclideanBall> known_inscribed_ball() const override;
  Point nearest_boundary(const Point& z) const override;
  /// Exactly 1 - |z|.
  double boundary_distance(const Point& z) const override;
  nlohmann::json to_json() const override;

 private:
  std::size_t n_;
};

/// Axis-aligned ellipsoid psi = 1 - sum_j (x_j/a_j)^2 + (y_j/b_j)^2 with
/// semi-axes given interleaved as (a_1, b_1, ..., a_n, b_n).
class EllipsoidDomain final : public Domain {
 public:
  explicit EllipsoidDomain(std::vector<double> semi_axes);
  std::size_t dim() const override { return axes_.size() / 2; }
  std::string type() const override { return "ellipsoid"; }
  double psi(const Point& z) const override;
  std::optional<Point> dpsi_analytic(const Point& z) const override;
  double bounding_radius() const override;
  double inner_radius() const override;
  std::optional<EuclideanBall> known_inscribed_ball() const override;
  /// Exact: Lagrange multiplier located by bisection.
  Point nearest_boundary(const Point& z) const override;
  nlohmann::json to_json() const override;

  const std::vector<double>& semi_axes() const { return axes_; }

 private:
  std::vector<double> axes_;
};

/// psi = 1 - |z|^2 - eps exp(-|z - p|^2 / sigma^2): a ball with a smooth dent.
class PerturbedBallDomain final : public Domain {
 public:
  PerturbedBallDomain(std::size_t n, double eps, Point bump_center, double sigma,
                      double inner_radius = 0.5);
  std::size_t dim() const override { return n_; }
  std::string type() const override { return "perturbed_ball"; }
  double psi(const Point& z) const override;
  std::optional<Point> dpsi_analytic(const Point& z) const override;
  double bounding_radius() const override { return 1.0; }
  double inner_radius() const override { return inner_; }
  nlohmann::json to_json() const override;

 private:
  std::size_t n_;
  double eps_;
  Point bump_;
  double sigma_;
  double inner_;
};

/// {type: "ball"|"ellipsoid"|"perturbed_ball", ...}.
std::unique_ptr<Domain> domain_from_json(const nlohmann::json& j);

/// A Euclidean ball B inside D with z0 in B and d(z0, dB) = d(z0, dD): the
/// ball of radius inner_radius tangent at the nearest boundary point, or
/// B(z0, d(z0)) far from the boundary.
EuclideanBall tangent_inscribed_ball(const Domain& D, const Point& z0);

/// Uniform samples from B_B(z0, r) for B = tangent_inscribed_ball(D, z0), a
/// subset of B_D(z0, r). For the unit ball this is B_D(z0, r) itself.
std::vector<Point> sample_inner_kobayashi_ball(const Domain& D, const Point& z0, double r,
                                               std::size_t count, std::uint64_t seed);

/// Kobayashi distance of the Euclidean ball B(c, R).
double kobayashi_in_ball(const EuclideanBall& B, const Point& z, const Point& w);

struct DistanceBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool upper_found = true;
  std::string upper_method;
};

/// lower from the circumscribed ball B(0, R); upper from the best of an
/// inscribed ball containing both points and a chain of inscribed balls along
/// the segment [z, w].
DistanceBounds kobayashi_bounds(const Domain& D, const Point& z, const Point& w);

struct BoundaryEstimate {
  double c0 = 0.0;
  double C0 = 0.0;
};

/// c0 = min(lower + log(d)/2), C0 = max(upper + log(d)/2) over probes.
BoundaryEstimate estimate_boundary_constants(const Domain& D, const Point& z0,
                                             const std::vector<Point>& probes);

/// Smallest C2 with (1-r)/C2 d(z0) <= d(z) <= C2/(1-r) d(z0) over samples of
/// B_D(z0, r); passes when C2 <= 4.
CheckReport check_distance_comparison(const Domain& D, const Point& z0, double r,
                                      std::size_t samples, std::uint64_t seed);

/// Largest c with d(z0) >= c (|z-z0|^2 + |dpsi_z0(z-z0)|) over samples of
/// B_D(z0, r). Passes when the constant is positive and finite.
CheckReport check_defining_fn_inequality(const Domain& D, const Point& z0, double r,
                                         std::size_t samples, std::uint64_t seed);

/// Stability of q(r) = c_{2,r} / (1 - r^2) over increasing `radii`: the
/// statistic is the largest drop q(r_i) / q(r_{i+1}), which must stay <= 2
/// for c_{2,r} >= c_2 (1 - r^2) to hold with c_2 = min q (in the details).
CheckReport check_defining_fn_scaling(const Domain& D, const Point& z0,
                                      const std::vector<double>& radii, std::size_t samples,
                                      std::uint64_t seed);

}  // namespace carleson
