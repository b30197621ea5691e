#pragma once

// Covering of K_eps = {|z| <= 1 - eps} in B^n by Kobayashi balls B(z_k, r)
// whose centers carry pairwise disjoint balls B(z_k, r/3), obtained by greedy
// selection from a quasi-random candidate net. Covering and multiplicity are
// certified on random probes, not proved.

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "carleson/domains.hpp"
#include "carleson/kernels.hpp"
#include "carleson/point.hpp"

namespace carleson {

struct CoverOptions {
  std::size_t probes = 10000;
  std::size_t refine_factor = 4;
  double candidate_factor = 4.0;  ///< candidates per r/3-ball volume of K_eps
  int max_doublings = 3;
  /// Hill climbs on the multiplicity count, started from the best probes of
  /// each probe set; 0 keeps the raw probe maximum.
  std::size_t polish_starts = 32;
  std::size_t polish_steps = 1000;
  Exec exec = Exec::parallel;
};

struct CoverResult {
  std::vector<Point> centers;
  double eps = 0.0;
  double r = 0.0;
  double multiplicity_radius = 0.0;  ///< R = (1 + r) / 2
  double disjoint_threshold = 0.0;   ///< 2t / (1 + t^2), t = r/3
  double min_center_distance = 0.0;  ///< +inf for a single center
  std::size_t candidates = 0;
  std::size_t probes = 0;
  std::size_t uncovered = 0;
  std::size_t multiplicity = 0;          ///< max count from the first `probes` probes
  std::size_t multiplicity_refined = 0;  ///< same from refine_factor times as many

  bool covered() const { return uncovered == 0; }
  bool disjoint() const { return min_center_distance >= disjoint_threshold; }
  bool stable() const {
    return multiplicity_refined <= multiplicity + 1 && multiplicity <= multiplicity_refined + 1;
  }
  nlohmann::json to_json() const;
};

/// Balls B(a, t) and B(b, t) are disjoint iff rho(a, b) >= 2t / (1 + t^2).
double disjoint_threshold(double t);

/// Halton sequence (first 2n primes) with a Cranley-Patterson shift derived
/// from the seed, pushed to the invariant measure on K_eps. Index 0 is the
/// origin.
std::vector<Point> candidate_net(std::size_t n, double eps, std::size_t count,
                                 std::uint64_t seed);

/// Throws AnalysisError with a refinement hint when the candidate net is
/// still too sparse after max_doublings.
CoverResult greedy_cover(std::size_t n, double eps, double r, std::uint64_t seed,
                         const CoverOptions& opts = {});

/// Unit-ball domains only; other domains raise ParameterError.
CoverResult greedy_cover(const Domain& D, double eps, double r, std::uint64_t seed,
                         const CoverOptions& opts = {});

}  // namespace carleson
