#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "carleson/point.hpp"

namespace carleson {

/// Point mass. `boundary_distance` = 1 - |point| is stored separately so that
/// atoms extremely close to the sphere keep their exact weight geometry even
/// when the coordinates round to norm 1.
struct Atom {
  Point point;
  double weight = 0.0;
  double boundary_distance = 0.0;

  /// 1 - |point|^2 computed from the stored distance.
  double one_minus_norm2() const { return boundary_distance * (2.0 - boundary_distance); }
};

/// coeff * (1 - |z|^2)^s against normalized volume.
struct PowerDensity {
  double coeff = 1.0;
  double s = 0.0;
};

/// Finite positive measure on B^n: atoms plus a sum of power densities.
class Measure {
 public:
  explicit Measure(std::size_t n);

  static Measure lebesgue(std::size_t n);
  static Measure power(std::size_t n, double s, double coeff = 1.0);
  static Measure dirac(const Point& p, double weight = 1.0);

  /// Throws ValidationError for non-positive weights or points off B^n.
  Measure& add_atom(const Point& p, double weight,
                    std::optional<double> boundary_distance = std::nullopt);
  /// Throws ValidationError unless coeff > 0 and s > -1 (finite mass).
  Measure& add_density(PowerDensity d);

  Measure scaled(double a) const;
  Measure plus(const Measure& other) const;

  std::size_t dim() const noexcept { return n_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::vector<PowerDensity>& densities() const noexcept { return densities_; }
  bool has_density() const noexcept { return !densities_.empty(); }

  /// Density value at z.
  double density(const Point& z) const;
  /// Density value in terms of x = 1 - |z|^2.
  double density_from_gap(double x) const;
  /// Smallest density exponent, or 0 without densities.
  double boundary_exponent() const;

  double atomic_mass() const;
  /// Exact: the integral of (1-|z|^2)^s over B^n is n! Gamma(s+1)/Gamma(n+s+1).
  double density_mass() const;
  double total_mass() const { return atomic_mass() + density_mass(); }

  nlohmann::json to_json() const;

 private:
  std::size_t n_;
  std::vector<Atom> atoms_;
  std::vector<PowerDensity> densities_;
};

/// {atoms: [[coords, weight], ...], density: {type: "power", s, coeff} | "none"}
/// where coords are interleaved re/im reals. `n` fixes the dimension.
Measure measure_from_json(const nlohmann::json& j, std::size_t n);

}  // namespace carleson
