#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// into the library: each value is obtained by a different route (naive
// formulas, one-variable Mobius maps, series, quadrature).

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

/// Pseudohyperbolic distance by the textbook formula, no cancellation care.
inline double pseudo_naive(const std::vector<cplx>& z, const std::vector<cplx>& w) {
  double nz = 0.0, nw = 0.0;
  cplx zw = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    nz += std::norm(z[i]);
    nw += std::norm(w[i]);
    zw += z[i] * std::conj(w[i]);
  }
  return std::sqrt(1.0 - (1.0 - nz) * (1.0 - nw) / std::norm(1.0 - zw));
}

/// Disc automorphism (a - z) / (1 - conj(a) z).
inline cplx mobius(cplx a, cplx z) { return (a - z) / (1.0 - std::conj(a) * z); }

/// |(z - w) / (1 - conj(w) z)| in the disc.
inline double mobius_distance(cplx z, cplx w) { return std::abs((z - w) / (1.0 - std::conj(w) * z)); }

/// Dilogarithm by its power series, |x| <= 1.
inline double li2(double x) {
  double s = 0.0, p = x;
  for (int k = 1; k < 2000; ++k) {
    s += p / (static_cast<double>(k) * k);
    p *= x;
    if (std::abs(p) < 1e-300) break;
  }
  return s;
}

/// Composite Simpson rule on [a, b] with m (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int m) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int i = 1; i < m; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// int over the disc (normalized area) of g(w), polar Simpson grid.
inline double disc_integral(const std::function<double(cplx)>& g, int mr = 400, int mt = 400) {
  const double two_pi = 2.0 * std::numbers::pi;
  auto radial = [&](double r) {
    auto ang = [&](double t) { return g(std::polar(r, t)); };
    return simpson(ang, 0.0, two_pi, mt) * r;
  };
  return simpson(radial, 0.0, 1.0, mr) / std::numbers::pi;
}

/// Berezin transform of (1-|u|^2)^s dA at real x in the disc, by quadrature of
/// (1-|phi_x(w)|^2)^s over w (valid for s >= 0).
inline double berezin_power_disc(double s, double x) {
  return disc_integral([&](cplx w) {
    const double g = 1.0 - std::norm(mobius(x, w));
    return std::pow(std::max(g, 0.0), s);
  });
}

}  // namespace oracle
