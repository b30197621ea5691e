#pragma once

// Carleson tests for measures on B^n: the ratio test mu(B)/nu(B) on Kobayashi
// balls, boundedness of the Berezin transform, and the defining inequality on
// a family of test functions. Boundedness is judged from boundary-approach
// schedules by a log-log slope fit, with an explicit inconclusive outcome.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "carleson/ball.hpp"
#include "carleson/integrate.hpp"
#include "carleson/measure.hpp"
#include "carleson/report.hpp"

namespace carleson {

/// mu(B): atoms by membership, densities by MC over the ellipsoid.
EstimateWithError measure_of_ball(const Measure& mu, const KobayashiBall& ball,
                                  const MCConfig& mc);

struct ScheduleCenter {
  Point z;
  double d = 0.0;    ///< 1 - |z|
  std::string kind;  ///< radial | tangential | atom | origin
};

/// Radial and tangentially offset centers with d = 2^-k, k = 1..kmax, then
/// the atoms of mu with d <= 1/2 (as long as they stay inside the guard band
/// of kobayashi_ball; at most 64, evenly spaced in order of depth), and
/// optionally the origin.
std::vector<ScheduleCenter> boundary_schedule(const Measure& mu, int kmax = 12,
                                              bool include_origin = false);

struct GrowthRow {
  Point center;
  double d = 0.0;
  double value = 0.0;
  double std_error = 0.0;
};

struct GrowthFit {
  double slope = 0.0;     ///< d log(value) / d log(d) on the deep half
  double slope_se = 0.0;
  double growth = 1.0;    ///< max(deep half) / max(shallow half)
  std::size_t used = 0;
  Verdict verdict = Verdict::inconclusive;
  std::string reason;
};

/// fail: slope + 2 se < -0.1 and growth > 1. pass: growth < 10 and either
/// slope > -0.1 or growth <= 1 (the deep half never exceeds the shallow
/// half). inconclusive: otherwise, or when a used row has relative error
/// > 0.5.
/// Fewer than 3 nonzero rows count as bounded.
GrowthFit classify_growth(const std::vector<GrowthRow>& rows);

struct RatioTestResult {
  double r = 0.0;
  std::vector<GrowthRow> rows;
  GrowthFit fit;
  double sup = 0.0;
};

RatioTestResult carleson_ratio_test(const Measure& mu, double r,
                                    const std::vector<ScheduleCenter>& centers,
                                    const MCConfig& mc);

struct BerezinTestResult {
  std::vector<GrowthRow> rows;
  GrowthFit fit;
  EstimateWithError sup;
};

BerezinTestResult carleson_berezin_test(const Measure& mu,
                                        const std::vector<ScheduleCenter>& probes,
                                        const MCConfig& mc);

struct FunctionalTestResult {
  std::vector<GrowthRow> kernel_rows;  ///< f = k_{z_j}: int |f|^2 dmu / ||f||^2
  std::vector<double> polynomial_ratios;
  double constant_ratio = 0.0;         ///< f = 1: total mass
  GrowthFit fit;
  double constant = 0.0;               ///< max over the family
};

/// p = 2, f in {1, k_{z_j}, random quadratic polynomials}. Atoms are summed
/// and power densities integrate every f in closed form, so this test uses
/// no sampling at all and is independent of the other two.
FunctionalTestResult carleson_functional_test(const Measure& mu,
                                              const std::vector<ScheduleCenter>& centers,
                                              std::size_t family_size, std::uint64_t seed,
                                              double p = 2.0);

struct CarlesonConfig {
  std::vector<double> radii{0.3, 0.5, 0.7};
  int kmax = 12;
  std::size_t polynomial_family = 10;
  MCConfig mc;
};

struct CarlesonVerdict {
  EstimateWithError berezin_sup;
  std::map<double, double> ratio_sup;
  std::map<double, GrowthFit> ratio_fits;
  double functional_constant = 0.0;
  Verdict functional = Verdict::inconclusive;
  Verdict berezin = Verdict::inconclusive;
  Verdict ratio = Verdict::inconclusive;
  GrowthFit berezin_fit;
  GrowthFit functional_fit;
  bool agreement = false;
  std::vector<ScheduleCenter> centers;
  std::vector<GrowthRow> berezin_rows;
  std::map<double, std::vector<GrowthRow>> ratio_rows;

  /// Combined verdict: the shared verdict when all agree, otherwise
  /// inconclusive (disagreement is reported, not resolved).
  Verdict overall() const;
  nlohmann::json to_json() const;
};

CarlesonVerdict cross_check_equivalence(const Measure& mu, const CarlesonConfig& cfg);

}  // namespace carleson
