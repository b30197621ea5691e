#include "carleson/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "carleson/ball.hpp"
#include "carleson/errors.hpp"
#include "carleson/rng.hpp"
#include "hyperbolic_grid.hpp"

namespace carleson {

namespace {

constexpr std::size_t kBruteForceLimit = 10000;
constexpr std::size_t kTailTerms = 10;

double metric_distance(Metric m, const Point& a, const Point& b) {
  switch (m) {
    case Metric::pseudohyperbolic:
      return pseudo_unchecked(a, b);
    case Metric::kobayashi:
      return std::atanh(pseudo_unchecked(a, b));
    case Metric::euclidean:
      return carleson::distance(a, b);
  }
  return 0.0;
}

}  // namespace

std::string to_string(Metric m) {
  switch (m) {
    case Metric::pseudohyperbolic:
      return "pseudohyperbolic";
    case Metric::kobayashi:
      return "kobayashi";
    case Metric::euclidean:
      return "euclidean";
  }
  return "?";
}

Metric metric_from_string(const std::string& s) {
  if (s == "pseudohyperbolic" || s == "rho") return Metric::pseudohyperbolic;
  if (s == "kobayashi") return Metric::kobayashi;
  if (s == "euclidean") return Metric::euclidean;
  throw ParameterError("unknown metric '" + s + "'");
}

PointSequence::PointSequence(std::vector<Point> points, Metric metric,
                             std::optional<std::vector<double>> boundary_distances)
    : points_(std::move(points)), metric_(metric) {
  if (boundary_distances && boundary_distances->size() != points_.size()) {
    throw ValidationError("boundary distance list has the wrong length");
  }
  d_.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const Point& p = points_[i];
    if (p.dim() != points_.front().dim() || p.dim() == 0) {
      throw ValidationError("sequence points must share a positive dimension");
    }
    if (!p.is_finite()) throw ValidationError("sequence points must be finite");
    const double plain = 1.0 - p.norm();
    double d = plain;
    if (boundary_distances) {
      d = (*boundary_distances)[i];
      if (std::abs(d - plain) > 1e-12) {
        throw ValidationError("boundary distance inconsistent with point " + std::to_string(i));
      }
    }
    if (metric_ != Metric::euclidean && !(d > 0.0)) {
      throw ValidationError("point " + std::to_string(i) + " is not inside the unit ball");
    }
    d_.push_back(d);
  }
}

std::size_t PointSequence::dim() const { return points_.empty() ? 0 : points_.front().dim(); }

double PointSequence::distance(std::size_t i, std::size_t j) const {
  return metric_distance(metric_, points_[i], points_[j]);
}

double PointSequence::distance_to(const Point& z, std::size_t j) const {
  return metric_distance(metric_, z, points_[j]);
}

double separation_constant_bruteforce(const PointSequence& G, Exec exec) {
  if (G.size() < 2) throw ParameterError("separation needs at least two points");
  return min_pairwise(
      G.size(), [&](std::size_t i, std::size_t j) { return G.distance(i, j); }, exec);
}

double separation_constant(const PointSequence& G, Exec exec) {
  if (G.size() < 2) throw ParameterError("separation needs at least two points");
  if (G.size() <= kBruteForceLimit) return separation_constant_bruteforce(G, exec);

  // Sweep in the pseudohyperbolic (or Euclidean) distance, convert at the end.
  const bool euclid = G.metric() == Metric::euclidean;
  std::vector<std::size_t> order(G.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto x = [&](std::size_t i) { return G[i][0].real(); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x(a) < x(b); });
  std::vector<double> factor(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t i = order[k];
    factor[k] = euclid ? 1.0 : 0.5 * std::sqrt(std::max(0.0, 1.0 - G[i].norm2()));
  }
  auto base = [&](std::size_t a, std::size_t b) {
    return euclid ? carleson::distance(G[a], G[b]) : pseudo_unchecked(G[a], G[b]);
  };

  double best = std::numeric_limits<double>::infinity();
  const long count = static_cast<long>(order.size());
  auto sweep = [&](long k, double& local) {
    const std::size_t i = order[static_cast<std::size_t>(k)];
    for (long l = k + 1; l < count; ++l) {
      const std::size_t j = order[static_cast<std::size_t>(l)];
      if ((x(j) - x(i)) * factor[static_cast<std::size_t>(k)] >= local) break;
      local = std::min(local, base(i, j));
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel
    {
      double local = std::numeric_limits<double>::infinity();
#pragma omp for schedule(dynamic, 64)
      for (long k = 0; k < count; ++k) sweep(k, local);
#pragma omp critical
      best = std::min(best, local);
    }
  } else {
    for (long k = 0; k < count; ++k) sweep(k, best);
  }
  return G.metric() == Metric::kobayashi ? std::atanh(best) : best;
}

std::size_t count_in_ball(const PointSequence& G, const Point& z0, double r) {
  std::size_t c = 0;
  for (std::size_t j = 0; j < G.size(); ++j) {
    if (G.distance_to(z0, j) < r) ++c;
  }
  return c;
}

std::vector<std::vector<std::size_t>> Decomposition::classes() const {
  std::vector<std::vector<std::size_t>> out(n_colors);
  for (std::size_t i = 0; i < color_of.size(); ++i) out[color_of[i]].push_back(i);
  return out;
}

Decomposition greedy_decompose(const PointSequence& G, double r) {
  Decomposition dec;
  dec.color_of.resize(G.size());
  std::vector<char> used;
  const double rho = G.metric() == Metric::kobayashi ? std::tanh(r) : r;
  std::optional<detail::HyperbolicGrid> grid;
  if (G.metric() != Metric::euclidean && rho > 0.0 && rho < 1.0) grid.emplace(G.dim(), rho);
  for (std::size_t i = 0; i < G.size(); ++i) {
    used.assign(dec.n_colors + 1, 0);
    if (grid) {
      grid->visit(G[i], [&](std::uint32_t j) {
        if (G.distance(i, j) < r) used[dec.color_of[j]] = 1;
        return false;
      });
      grid->insert(G[i], static_cast<std::uint32_t>(i));
    } else {
      for (std::size_t j = 0; j < i; ++j) {
        if (G.distance(i, j) < r) used[dec.color_of[j]] = 1;
      }
    }
    std::size_t c = 0;
    while (used[c]) ++c;
    dec.color_of[i] = c;
    dec.n_colors = std::max(dec.n_colors, c + 1);
  }
  return dec;
}

std::vector<std::size_t> count_in_balls(const PointSequence& G, const std::vector<Point>& probes,
                                        double r, Exec exec) {
  const double rho = G.metric() == Metric::kobayashi ? std::tanh(r) : r;
  if (G.metric() == Metric::euclidean || !(rho > 0.0 && rho < 1.0)) {
    return count_matches(
        probes.size(), G.size(),
        [&](std::size_t q, std::size_t t) { return G.distance_to(probes[q], t) < r; }, exec);
  }
  detail::HyperbolicGrid grid(G.dim(), rho);
  for (std::size_t j = 0; j < G.size(); ++j) grid.insert(G[j], static_cast<std::uint32_t>(j));
  return map_indexed<std::size_t>(
      probes.size(),
      [&](std::size_t q) {
        std::size_t c = 0;
        grid.visit(probes[q], [&](std::uint32_t j) {
          if (G.distance_to(probes[q], j) < r) ++c;
          return false;
        });
        return c;
      },
      exec);
}

std::size_t max_self_count(const PointSequence& G, double r, Exec exec) {
  const auto counts = count_in_balls(G, G.points(), r, exec);
  std::size_t m = 0;
  for (auto c : counts) m = std::max(m, c);
  return m;
}

Measure dirac_carleson_measure(const PointSequence& G) {
  if (G.empty()) throw ParameterError("empty sequence");
  const std::size_t n = G.dim();
  Measure mu(n);
  for (std::size_t j = 0; j < G.size(); ++j) {
    const double d = G.boundary_distance(j);
    mu.add_atom(G[j], std::pow(d, static_cast<double>(n + 1)), d);
  }
  return mu;
}

EscapeWeight EscapeWeight::none() { return {}; }

EscapeWeight EscapeWeight::power(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw ParameterError("power weight needs s > 0");
  EscapeWeight h;
  h.kind_ = Kind::power;
  h.param_ = s;
  return h;
}

EscapeWeight EscapeWeight::exp_scaled(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("exp weight needs a > 0");
  EscapeWeight h;
  h.kind_ = Kind::exp_scaled;
  h.param_ = a;
  return h;
}

EscapeWeight EscapeWeight::custom(std::function<double(double)> fn, std::string label) {
  if (!fn) throw ParameterError("custom weight needs a function");
  double prev = -1.0;
  for (int i = 0; i <= 60; ++i) {
    const double x = std::pow(10.0, -3.0 + 0.1 * i);
    const double v = fn(x);
    if (!std::isfinite(v) || v < 0.0 || v < prev) {
      throw ParameterError("weight '" + label + "' is not increasing and positive");
    }
    prev = v;
  }
  EscapeWeight h;
  h.kind_ = Kind::custom;
  h.fn_ = std::move(fn);
  h.label_ = std::move(label);
  return h;
}

EscapeWeight EscapeWeight::from_json(const nlohmann::json& j) {
  if (j.is_null()) return none();
  if (!j.is_object()) throw ParameterError("weight must be an object");
  const std::string family = j.value("family", std::string("none"));
  for (const auto& [key, value] : j.items()) {
    if (key != "family" && key != "s" && key != "a") {
      throw ParameterError("unknown weight key '" + key + "'");
    }
  }
  if (family == "none") return none();
  if (family == "power") return power(j.value("s", 2.0));
  if (family == "exp") return exp_scaled(j.value("a", 1.0));
  throw ParameterError("weight family '" + family + "' is not one of none, power, exp");
}

std::string EscapeWeight::describe() const {
  switch (kind_) {
    case Kind::none:
      return "none";
    case Kind::power:
      return "x^" + std::to_string(param_);
    case Kind::exp_scaled:
      return "exp(-" + std::to_string(param_) + "/x)";
    case Kind::custom:
      return label_;
  }
  return "?";
}

double EscapeWeight::operator()(double x) const {
  switch (kind_) {
    case Kind::none:
      return 1.0;
    case Kind::power:
      return std::pow(x, param_);
    case Kind::exp_scaled:
      return std::exp(-param_ / x);
    case Kind::custom:
      return fn_(x);
  }
  return 1.0;
}

std::string to_string(EscapeExponent e) {
  switch (e) {
    case EscapeExponent::n:
      return "n";
    case EscapeExponent::n_plus_1:
      return "n+1";
    case EscapeExponent::two_n:
      return "2n";
  }
  return "?";
}

EscapeExponent escape_exponent_from_string(const std::string& s) {
  if (s == "n") return EscapeExponent::n;
  if (s == "n+1") return EscapeExponent::n_plus_1;
  if (s == "2n") return EscapeExponent::two_n;
  throw ParameterError("exponent must be one of n, n+1, 2n");
}

EscapeSeries escape_sum(const PointSequence& G, const EscapeWeight& h, EscapeExponent exponent) {
  EscapeSeries out;
  const double n = static_cast<double>(G.dim());
  out.exponent = exponent == EscapeExponent::n ? n
                 : exponent == EscapeExponent::n_plus_1 ? n + 1.0
                                                        : 2.0 * n;
  const bool weighted = h.kind() != EscapeWeight::Kind::none;
  double sum = 0.0, comp = 0.0;
  for (std::size_t j = 0; j < G.size(); ++j) {
    const double d = G.boundary_distance(j);
    if (weighted && !(d < 1.0)) {
      throw ParameterError("h(-1/log d) needs d < 1; point " + std::to_string(j) + " has d >= 1");
    }
    const double term = std::pow(d, out.exponent) * (weighted ? h(-1.0 / std::log(d)) : 1.0);
    out.terms.push_back(term);
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    out.partial_sums.push_back(sum + comp);
  }
  out.total = out.partial_sums.empty() ? 0.0 : out.partial_sums.back();
  const std::size_t tail = std::min(kTailTerms, out.terms.size());
  for (std::size_t j = out.terms.size() - tail; j < out.terms.size(); ++j) {
    out.tail_increment += out.terms[j];
  }
  return out;
}

ShellCounts shell_counts(const PointSequence& G, const Point& z0, std::optional<double> horizon,
                         std::size_t first_shell, Exec exec) {
  ShellCounts out;
  out.bound = static_cast<double>(z0.dim()) + 0.2;
  out.first_shell = first_shell;
  if (G.empty()) return out;
  const bool at_origin = z0.norm2() == 0.0;
  const auto shell = map_indexed<std::size_t>(
      G.size(),
      [&](std::size_t j) {
        double k;
        if (at_origin) {
          const double d = G.boundary_distance(j);
          k = 0.5 * std::log((2.0 - d) / d);
        } else {
          k = std::atanh(pseudo_unchecked(z0, G[j]));
        }
        return static_cast<std::size_t>(std::floor(2.0 * k));
      },
      exec);
  std::size_t top = 0;
  for (auto m : shell) top = std::max(top, m);
  out.counts.assign(top + 1, 0);
  for (auto m : shell) ++out.counts[m];

  std::size_t last = top;
  if (horizon) {
    const double h2 = 2.0 * *horizon;
    last = h2 >= 1.0 ? static_cast<std::size_t>(std::floor(h2)) - 1 : 0;
    last = std::min(last, top);
  } else if (top > 0) {
    last = top - 1;
  }
  out.last_shell = last;

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t used = 0;
  for (std::size_t m = first_shell; m <= last && m < out.counts.size(); ++m) {
    if (out.counts[m] == 0) continue;
    const double xm = static_cast<double>(m);
    const double ym = std::log(static_cast<double>(out.counts[m]));
    sx += xm;
    sy += ym;
    sxx += xm * xm;
    sxy += xm * ym;
    ++used;
  }
  out.fitted = used;
  if (used >= 2) {
    const double u = static_cast<double>(used);
    const double den = u * sxx - sx * sx;
    out.slope = den > 0.0 ? (u * sxy - sx * sy) / den : 0.0;
  }
  return out;
}

PointSequence radial_ladder(std::size_t n, int M, std::optional<Point> u) {
  if (n == 0 || M < 1) throw ParameterError("ladder needs n >= 1 and M >= 1");
  Point dir = u.value_or(Point::basis(n, 0));
  if (dir.dim() != n || std::abs(dir.norm() - 1.0) > 1e-12) {
    throw ParameterError("ladder direction must be a unit vector in C^n");
  }
  std::vector<Point> pts;
  std::vector<double> d;
  for (int m = 1; m <= M; ++m) {
    const double dm = std::exp(-static_cast<double>(m));
    pts.push_back(dir * cplx{1.0 - dm, 0.0});
    d.push_back(dm);
  }
  return PointSequence(std::move(pts), Metric::pseudohyperbolic, std::move(d));
}

Point draw_invariant(std::size_t n, double eps, double u_radius, std::span<const double> u_dir) {
  if (u_dir.size() != 2 * n - 1) throw ParameterError("direction needs 2n-1 uniforms");
  const double T = (1.0 - eps) * (1.0 - eps);
  const double y = std::pow(u_radius, 1.0 / static_cast<double>(n)) * T / (1.0 - T);
  const double radius = std::sqrt(y / (1.0 + y));
  std::vector<double> cuts(u_dir.begin(), u_dir.begin() + static_cast<long>(n - 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.insert(cuts.begin(), 0.0);
  cuts.push_back(1.0);
  Point z(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double mod = std::sqrt(std::max(0.0, cuts[j + 1] - cuts[j]));
    z[j] = std::polar(radius * mod, 2.0 * std::numbers::pi * u_dir[n - 1 + j]);
  }
  return z;
}

PointSequence maximal_packing(std::size_t n, double delta, double eps, std::size_t candidates,
                              std::uint64_t seed) {
  if (n == 0) throw ParameterError("dimension must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0,1)");
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0,1)");
  CounterRng rng(seed, 0);
  detail::HyperbolicGrid grid(n, delta);
  constexpr double kTie = 1e-9;
  const double delta2 = delta * delta;
  std::vector<Point> kept;
  std::vector<double> gap;
  std::vector<double> dir(2 * n - 1);
  for (std::size_t c = 0; c < candidates; ++c) {
    const double ur = rng.uniform();
    for (auto& v : dir) v = rng.uniform();
    const Point z = draw_invariant(n, eps, ur, dir);
    const double gz = 1.0 - z.norm2();
    // 1 - rho^2 = g_z g_w / |1 - <z,w>|^2; the exact form settles near-ties.
    const bool blocked = grid.visit(z, [&](std::uint32_t id) {
      const double r2 = 1.0 - gz * gap[id] / std::norm(cplx{1.0, 0.0} - inner(z, kept[id]));
      if (r2 < delta2 - kTie) return true;
      if (r2 > delta2 + kTie) return false;
      return pseudo_unchecked(z, kept[id]) < delta;
    });
    if (!blocked) {
      grid.insert(z, static_cast<std::uint32_t>(kept.size()));
      kept.push_back(z);
      gap.push_back(gz);
    }
  }
  std::vector<std::size_t> order(kept.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return gap[a] > gap[b]; });
  std::vector<Point> sorted;
  sorted.reserve(kept.size());
  for (std::size_t i : order) sorted.push_back(std::move(kept[i]));
  return PointSequence(std::move(sorted));
}

PointSequence perturbed_lattice(int levels, double jitter, std::uint64_t seed) {
  if (levels < 0 || levels > 40) throw ParameterError("levels must lie in [0, 40]");
  if (!(jitter >= 0.0 && jitter < 1.0)) throw ParameterError("jitter must lie in [0,1)");
  CounterRng rng(seed, 0);
  std::vector<Point> pts{Point(1)};
  for (int k = 1; k <= levels; ++k) {
    const double t = 1.0 - std::ldexp(1.0, -k);
    const std::size_t count = std::size_t{1} << (k + 2);
    const double offset = (k % 2) * 0.5;
    for (std::size_t i = 0; i < count; ++i) {
      const double angle = 2.0 * std::numbers::pi * (static_cast<double>(i) + offset) /
                           static_cast<double>(count);
      const Point p{std::polar(t, angle)};
      const double rad = jitter * std::sqrt(rng.uniform());
      const Point v{std::polar(rad, 2.0 * std::numbers::pi * rng.uniform())};
      pts.push_back(jitter > 0.0 ? ball_automorphism(p, v) : p);
    }
  }
  return PointSequence(std::move(pts));
}

}  // namespace carleson
