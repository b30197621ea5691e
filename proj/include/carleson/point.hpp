#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace carleson {

using cplx = std::complex<double>;

/// A point of complex n-space. Coordinates are dimensionless; the unit ball
/// B^n is the set of points with norm() < 1.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim) : coords_(dim, cplx{0.0, 0.0}) {}
  explicit Point(std::vector<cplx> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<cplx> coords) : coords_(coords) {}

  /// scale * e_k in dimension dim.
  static Point basis(std::size_t dim, std::size_t k, double scale = 1.0);
  /// Build from interleaved (re_1, im_1, ..., re_n, im_n).
  static Point from_real(std::span<const double> interleaved);

  std::size_t dim() const noexcept { return coords_.size(); }
  cplx& operator[](std::size_t i) { return coords_[i]; }
  const cplx& operator[](std::size_t i) const { return coords_[i]; }
  std::span<const cplx> coords() const noexcept { return coords_; }

  double norm2() const noexcept;
  double norm() const noexcept;
  bool is_finite() const noexcept;
  std::vector<double> to_real() const;

  Point& operator+=(const Point& o);
  Point& operator-=(const Point& o);
  Point& operator*=(cplx s);

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(Point a, cplx s) { return a *= s; }
  friend Point operator*(cplx s, Point a) { return a *= s; }
  friend Point operator-(Point a) { return a *= cplx{-1.0, 0.0}; }
  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<cplx> coords_;
};

/// Hermitian product <z,w> = sum z_j conj(w_j), accumulated with Neumaier
/// compensation in each component.
cplx inner(const Point& z, const Point& w);

/// Squared norm of the wedge z ^ w, i.e. |z|^2|w|^2 - |<z,w>|^2, computed
/// from the pairwise minors so it does not cancel for nearly parallel inputs.
double wedge_norm2(const Point& z, const Point& w);

double distance(const Point& z, const Point& w);

}  // namespace carleson
