#pragma once

// Point sequences in B^n: separation, counting in balls, first-fit
// decomposition into separated classes, the induced Dirac measures, escape
// sums and Kobayashi shell counts, plus three generators.
//
// Boundary distances are stored next to the coordinates. A ladder point
// 1 - e^{-40} rounds to the unit sphere in double precision, but its exact
// distance e^{-40} is still available to every sum that only needs d.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "carleson/kernels.hpp"
#include "carleson/measure.hpp"
#include "carleson/point.hpp"
#include "carleson/report.hpp"

namespace carleson {

enum class Metric { pseudohyperbolic, kobayashi, euclidean };

std::string to_string(Metric m);
Metric metric_from_string(const std::string& s);

class PointSequence {
 public:
  PointSequence() = default;
  /// Throws ValidationError on mixed dimensions, non-finite coordinates,
  /// points outside B^n (invariant metrics) or distances that disagree with
  /// 1 - |z| by more than 1e-12.
  explicit PointSequence(std::vector<Point> points, Metric metric = Metric::pseudohyperbolic,
                         std::optional<std::vector<double>> boundary_distances = std::nullopt);

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  std::size_t dim() const;
  Metric metric() const noexcept { return metric_; }
  const std::vector<Point>& points() const noexcept { return points_; }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  double boundary_distance(std::size_t i) const { return d_[i]; }
  const std::vector<double>& boundary_distances() const noexcept { return d_; }

  double distance(std::size_t i, std::size_t j) const;
  double distance_to(const Point& z, std::size_t j) const;

 private:
  std::vector<Point> points_;
  std::vector<double> d_;
  Metric metric_ = Metric::pseudohyperbolic;
};

/// inf over pairs of the metric distance. Exact pairwise evaluation up to
/// 10^4 points; beyond that a sort-and-sweep on Re z_1 prunes pairs with the
/// bound rho(z,w) >= |Re(z_1 - w_1)| sqrt(1-|z|^2) / 2.
double separation_constant(const PointSequence& G, Exec exec = Exec::parallel);

/// The pairwise evaluation, always exact (reference for the sweep).
double separation_constant_bruteforce(const PointSequence& G, Exec exec = Exec::parallel);

/// N(z0, r, G): points at distance < r from z0.
std::size_t count_in_ball(const PointSequence& G, const Point& z0, double r);

struct Decomposition {
  std::vector<std::size_t> color_of;
  std::size_t n_colors = 0;

  std::vector<std::vector<std::size_t>> classes() const;
};

/// First-fit colouring in sequence order: each point takes the smallest
/// colour not used by an earlier point at distance < r.
Decomposition greedy_decompose(const PointSequence& G, double r);

/// N(z, r, G) for every probe z. Invariant metrics use a bucket grid over
/// boundary-distance levels; Euclidean sequences are counted pairwise.
std::vector<std::size_t> count_in_balls(const PointSequence& G, const std::vector<Point>& probes,
                                        double r, Exec exec = Exec::parallel);

/// max_j N(x_j, r, G), the bound on the number of colours.
std::size_t max_self_count(const PointSequence& G, double r, Exec exec = Exec::parallel);

/// sum_j d(z_j)^{n+1} delta_{z_j}.
Measure dirac_carleson_measure(const PointSequence& G);

/// Increasing weight h on (0, inf) from a named family.
class EscapeWeight {
 public:
  enum class Kind { none, power, exp_scaled, custom };

  /// h absent: every term is d^e.
  static EscapeWeight none();
  /// h(x) = x^s, s > 0.
  static EscapeWeight power(double s);
  /// h(x) = exp(-a / x), a > 0. With a = 1, h(-1/log d) = d.
  static EscapeWeight exp_scaled(double a = 1.0);
  /// Arbitrary h; throws ParameterError if it decreases or leaves (0, inf)
  /// on a logarithmic grid of [1e-3, 1e3].
  static EscapeWeight custom(std::function<double(double)> h, std::string label = "custom");
  /// {"family": "none" | "power" | "exp", "s": .., "a": ..}; other families
  /// raise ParameterError.
  static EscapeWeight from_json(const nlohmann::json& j);

  Kind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return param_; }
  std::string describe() const;
  double operator()(double x) const;

 private:
  Kind kind_ = Kind::none;
  double param_ = 0.0;
  std::function<double(double)> fn_;
  std::string label_;
};

enum class EscapeExponent { n, n_plus_1, two_n };

std::string to_string(EscapeExponent e);
EscapeExponent escape_exponent_from_string(const std::string& s);

struct EscapeSeries {
  std::vector<double> terms;
  std::vector<double> partial_sums;
  double total = 0.0;
  double exponent = 0.0;
  /// Sum of the last min(10, N) terms.
  double tail_increment = 0.0;
  bool cauchy(double tol = 1e-6) const { return tail_increment < tol; }
};

/// Partial sums of sum_j d_j^e h(-1 / log d_j), or of sum_j d_j^e when h is
/// absent, in sequence order. Throws ParameterError when h is given and some
/// d_j >= 1.
EscapeSeries escape_sum(const PointSequence& G, const EscapeWeight& h, EscapeExponent exponent);

struct ShellCounts {
  std::vector<std::size_t> counts;  ///< N_m: m/2 <= k(z0, z) < (m+1)/2
  double slope = 0.0;               ///< least squares of log N_m on m
  std::size_t fitted = 0;
  std::size_t first_shell = 0;
  std::size_t last_shell = 0;
  double bound = 0.0;               ///< n + 0.2
  bool within_bound() const { return slope <= bound; }
};

/// Counts per Kobayashi shell around z0. The slope fit uses the nonempty
/// shells m >= first_shell whose outer radius (m+1)/2 does not exceed
/// `horizon`; with no horizon, the last nonempty shell is treated as
/// truncated and dropped.
ShellCounts shell_counts(const PointSequence& G, const Point& z0,
                         std::optional<double> horizon = std::nullopt,
                         std::size_t first_shell = 1, Exec exec = Exec::parallel);

/// z_m = (1 - e^{-m}) u for m = 1..M, u = e_1 by default, with exact
/// boundary distances e^{-m}.
PointSequence radial_ladder(std::size_t n, int M, std::optional<Point> u = std::nullopt);

/// Greedy maximal delta-packing (pseudohyperbolic) of K_eps = {|z| <= 1-eps}:
/// candidates drawn from the invariant measure restricted to K_eps are kept
/// when they are at distance >= delta from all kept points. The result is
/// ordered by increasing |z|.
PointSequence maximal_packing(std::size_t n, double delta, double eps, std::size_t candidates,
                              std::uint64_t seed);

/// Dyadic lattice in the disc (n = 1): the origin, then 2^{k+2} equally
/// spaced points on |z| = 1 - 2^{-k} for k = 1..levels, alternate levels
/// rotated by half a step, each moved by an automorphism by a pseudohyperbolic
/// amount < jitter.
PointSequence perturbed_lattice(int levels, double jitter, std::uint64_t seed);

/// Samples of the invariant measure restricted to {|z| <= 1-eps}.
Point draw_invariant(std::size_t n, double eps, double u_radius, std::span<const double> u_dir);

}  // namespace carleson
