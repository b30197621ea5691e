#include "carleson/cover.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "carleson/ball.hpp"
#include "carleson/errors.hpp"
#include "carleson/rng.hpp"
#include "carleson/sequences.hpp"

namespace carleson {

namespace {

constexpr std::uint32_t kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                     31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
constexpr double kBorderline = 1e-12;

double radical_inverse(std::uint64_t i, std::uint32_t base) {
  double inv = 1.0 / base, f = inv, v = 0.0;
  while (i > 0) {
    v += static_cast<double>(i % base) * f;
    i /= base;
    f *= inv;
  }
  return v;
}

// Points of K_eps with 1 - |z|^2 cached, for the cheap form
// 1 - rho^2 = (1-|z|^2)(1-|w|^2) / |1 - <z,w>|^2, accurate away from the sphere.
struct PointCloud {
  std::size_t n = 0;
  std::vector<cplx> coords;
  std::vector<double> gap;
  std::vector<Point> points;

  void push(const Point& p) {
    coords.insert(coords.end(), p.coords().begin(), p.coords().end());
    gap.push_back(1.0 - p.norm2());
    points.push_back(p);
  }
  std::size_t size() const { return gap.size(); }

  double rho2(std::size_t k, const Point& z, double gz) const {
    cplx s{0.0, 0.0};
    const cplx* c = coords.data() + k * n;
    for (std::size_t j = 0; j < n; ++j) s += z[j] * std::conj(c[j]);
    return 1.0 - gz * gap[k] / std::norm(cplx{1.0, 0.0} - s);
  }
};

double hyperbolic_volume(std::size_t n, double rho) {
  return std::pow(rho * rho / (1.0 - rho * rho), static_cast<double>(n));
}

PointCloud select_centers(const std::vector<Point>& cand, std::size_t n, double threshold) {
  PointCloud kept;
  kept.n = n;
  const double t2 = threshold * threshold;
  for (const Point& z : cand) {
    const double gz = 1.0 - z.norm2();
    bool ok = true;
    for (std::size_t k = 0; k < kept.size() && ok; ++k) {
      const double r2 = kept.rho2(k, z, gz);
      if (r2 < t2 - kBorderline) {
        ok = false;
      } else if (r2 < t2 + kBorderline) {
        ok = pseudo_unchecked(z, kept.points[k]) >= threshold;
      }
    }
    if (ok) kept.push(z);
  }
  return kept;
}

struct ProbeStat {
  bool covered = false;
  std::size_t count = 0;
};

std::size_t count_within(const PointCloud& kept, const Point& z, double R2) {
  const double gz = 1.0 - z.norm2();
  std::size_t c = 0;
  for (std::size_t k = 0; k < kept.size(); ++k) c += kept.rho2(k, z, gz) < R2 ? 1 : 0;
  return c;
}

// Random-step ascent of the count inside K_eps; steps are Mobius moves of
// shrinking pseudohyperbolic length, equal counts are accepted.
std::size_t climb(const PointCloud& kept, Point z, std::size_t best, double R2, double outer2,
                  std::size_t steps, CounterRng& rng) {
  const std::size_t n = z.dim();
  for (std::size_t s = 0; s < steps; ++s) {
    const double scale = 0.3 * (1.0 - static_cast<double>(s) / static_cast<double>(steps)) + 1e-3;
    Point v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = cplx{rng.normal(), rng.normal()};
    v *= cplx{scale * rng.uniform() / v.norm(), 0.0};
    const Point w = ball_automorphism(z, v);
    if (w.norm2() > outer2) continue;
    const std::size_t c = count_within(kept, w, R2);
    if (c >= best) {
      best = c;
      z = w;
    }
  }
  return best;
}

// Maximum count over the first m probes after climbing from the best of them.
std::size_t polished_max(const PointCloud& kept, const std::vector<ProbeStat>& stats, std::size_t m,
                         const std::function<Point(std::size_t)>& probe, double R2, double outer2,
                         std::uint64_t seed, const CoverOptions& opts) {
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  const std::size_t k = std::min(opts.polish_starts, m);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return stats[a].count != stats[b].count ? stats[a].count > stats[b].count
                                                              : a < b;
                    });
  std::size_t best = 0;
  for (std::size_t i = 0; i < m; ++i) best = std::max(best, stats[i].count);
  const auto climbed = map_indexed<std::size_t>(
      k,
      [&](std::size_t j) {
        const std::size_t i = order[j];
        CounterRng rng(seed, i);
        return climb(kept, probe(i), stats[i].count, R2, outer2, opts.polish_steps, rng);
      },
      opts.exec);
  for (std::size_t c : climbed) best = std::max(best, c);
  return best;
}

}  // namespace

double disjoint_threshold(double t) { return 2.0 * t / (1.0 + t * t); }

nlohmann::json CoverResult::to_json() const {
  return {{"centers", centers.size()},
          {"eps", eps},
          {"r", r},
          {"multiplicity_radius", multiplicity_radius},
          {"disjoint_threshold", disjoint_threshold},
          {"min_center_distance", min_center_distance},
          {"disjoint", disjoint()},
          {"candidates", candidates},
          {"probes", probes},
          {"uncovered", uncovered},
          {"multiplicity", multiplicity},
          {"multiplicity_refined", multiplicity_refined},
          {"stable", stable()}};
}

std::vector<Point> candidate_net(std::size_t n, double eps, std::size_t count,
                                 std::uint64_t seed) {
  if (2 * n > std::size(kPrimes)) throw ParameterError("candidate net supports n <= 10");
  std::vector<double> shift(2 * n);
  CounterRng rng(seed, 0);
  for (auto& s : shift) s = rng.uniform();
  std::vector<Point> out;
  out.reserve(count);
  if (count > 0) out.emplace_back(n);
  std::vector<double> u(2 * n);
  for (std::size_t i = 1; i < count; ++i) {
    for (std::size_t k = 0; k < 2 * n; ++k) {
      const double v = radical_inverse(i, kPrimes[k]) + shift[k];
      u[k] = v - std::floor(v);
    }
    const double ur = u[0] > 0.0 ? u[0] : 0.5 / static_cast<double>(count);
    out.push_back(draw_invariant(n, eps, ur, std::span<const double>(u).subspan(1)));
  }
  return out;
}

CoverResult greedy_cover(std::size_t n, double eps, double r, std::uint64_t seed,
                         const CoverOptions& opts) {
  if (n == 0) throw ParameterError("dimension must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0,1) so K_eps is nonempty");
  if (!(r > 0.0 && r < 1.0)) throw ParameterError("r must lie in (0,1)");
  if (opts.probes == 0 || opts.refine_factor == 0) throw ParameterError("probe counts must be positive");

  CoverResult res;
  res.eps = eps;
  res.r = r;
  res.multiplicity_radius = 0.5 * (1.0 + r);
  res.disjoint_threshold = disjoint_threshold(r / 3.0);

  const double outer = 1.0 - eps;
  const double k_volume = std::pow(outer * outer / (1.0 - outer * outer), static_cast<double>(n));
  std::size_t count = static_cast<std::size_t>(
      std::ceil(opts.candidate_factor * k_volume / hyperbolic_volume(n, r / 3.0)));
  count = std::max<std::size_t>(count, 64);
  if (outer < r) count = 1;

  const std::uint64_t net_seed = derive_seed(seed, 1);
  const std::uint64_t probe_seed = derive_seed(seed, 2);
  const std::uint64_t climb_seed = derive_seed(seed, 3);
  const std::size_t total_probes = opts.probes * opts.refine_factor;
  const double r2 = r * r;
  const double R2 = res.multiplicity_radius * res.multiplicity_radius;

  for (int attempt = 0; attempt <= opts.max_doublings; ++attempt) {
    const auto cand = candidate_net(n, eps, count, net_seed);
    const PointCloud kept = select_centers(cand, n, res.disjoint_threshold);

    const auto probe = [&](std::size_t i) {
      CounterRng rng(probe_seed, i);
      const double ur = rng.uniform();
      std::vector<double> dir(2 * n - 1);
      for (auto& v : dir) v = rng.uniform();
      return draw_invariant(n, eps, ur, dir);
    };
    const auto stats = map_indexed<ProbeStat>(
        total_probes,
        [&](std::size_t i) {
          const Point z = probe(i);
          const double gz = 1.0 - z.norm2();
          ProbeStat s;
          for (std::size_t k = 0; k < kept.size(); ++k) {
            const double q = kept.rho2(k, z, gz);
            if (q < r2) s.covered = true;
            if (q < R2) ++s.count;
          }
          return s;
        },
        opts.exec);

    res.centers = kept.points;
    res.candidates = count;
    res.probes = opts.probes;
    res.uncovered = 0;
    res.multiplicity = 0;
    res.multiplicity_refined = 0;
    for (std::size_t i = 0; i < total_probes; ++i) {
      if (i < opts.probes) {
        if (!stats[i].covered) ++res.uncovered;
        res.multiplicity = std::max(res.multiplicity, stats[i].count);
      }
      res.multiplicity_refined = std::max(res.multiplicity_refined, stats[i].count);
    }
    if (res.covered()) {
      const double outer2 = outer * outer;
      res.multiplicity = polished_max(kept, stats, opts.probes, probe, R2, outer2, climb_seed, opts);
      res.multiplicity_refined =
          polished_max(kept, stats, total_probes, probe, R2, outer2, climb_seed, opts);
      break;
    }
    if (attempt == opts.max_doublings) {
      throw AnalysisError("candidate net too sparse: " + std::to_string(res.uncovered) + " of " +
                          std::to_string(opts.probes) + " probes uncovered with " +
                          std::to_string(count) + " candidates; raise candidate_factor above " +
                          std::to_string(opts.candidate_factor * 2.0 * std::ldexp(1.0, attempt)));
    }
    count *= 2;
  }

  const auto& c = res.centers;
  res.min_center_distance =
      c.size() < 2 ? std::numeric_limits<double>::infinity()
                   : min_pairwise(
                         c.size(),
                         [&](std::size_t i, std::size_t j) { return pseudo_unchecked(c[i], c[j]); },
                         opts.exec);
  return res;
}

CoverResult greedy_cover(const Domain& D, double eps, double r, std::uint64_t seed,
                         const CoverOptions& opts) {
  if (dynamic_cast<const UnitBallDomain*>(&D) == nullptr) {
    throw ParameterError("greedy_cover is implemented for the unit ball only");
  }
  return greedy_cover(D.dim(), eps, r, seed, opts);
}

}  // namespace carleson
