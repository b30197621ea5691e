#include "carleson/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "carleson/bergman.hpp"
#include "carleson/errors.hpp"

namespace carleson {

namespace {

constexpr double kSlopeThreshold = -0.1;
constexpr double kGrowthLimit = 10.0;
constexpr double kMaxRelativeError = 0.5;
constexpr double kGuard = 2e-12;
constexpr std::size_t kMaxAtomCenters = 64;

nlohmann::json rows_json(const std::vector<GrowthRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"center", r.center.to_real()},
                   {"d", r.d},
                   {"value", r.value},
                   {"std_error", r.std_error}});
  }
  return out;
}

nlohmann::json fit_json(const GrowthFit& f) {
  return {{"slope", f.slope},   {"slope_se", f.slope_se},          {"growth", f.growth},
          {"used", f.used},     {"verdict", to_string(f.verdict)}, {"reason", f.reason}};
}

}  // namespace

EstimateWithError measure_of_ball(const Measure& mu, const KobayashiBall& ball,
                                  const MCConfig& mc) {
  if (ball.base.dim() != mu.dim()) throw ParameterError("ball dimension mismatch");
  double atomic = 0.0;
  for (const Atom& a : mu.atoms()) {
    if (pseudo_unchecked(ball.base, a.point) < ball.pseudo_radius) atomic += a.weight;
  }
  EstimateWithError est;
  if (mu.has_density()) {
    est = integrate_density([&](const Point& z) { return mu.density(z); }, ball.ellipsoid(), mc);
  }
  est.value += atomic;
  return est;
}

std::vector<ScheduleCenter> boundary_schedule(const Measure& mu, int kmax, bool include_origin) {
  const std::size_t n = mu.dim();
  std::vector<ScheduleCenter> out;
  if (include_origin) out.push_back({Point(n), 1.0, "origin"});
  const double theta = std::numbers::pi / 3.0;
  for (int k = 1; k <= kmax; ++k) {
    const double d = std::ldexp(1.0, -k);
    const double t = 1.0 - d;
    out.push_back({Point::basis(n, 0, t), d, "radial"});
    Point tang(n);
    if (n >= 2) {
      tang[0] = cplx{t * std::cos(theta), 0.0};
      tang[1] = cplx{t * std::sin(theta), 0.0};
    } else {
      tang[0] = std::polar(t, theta);
    }
    out.push_back({tang, d, "tangential"});
  }
  std::vector<const Atom*> eligible;
  for (const Atom& a : mu.atoms()) {
    if (a.boundary_distance <= 0.5 && a.boundary_distance > kGuard &&
        a.point.norm() < 1.0 - 1e-12) {
      eligible.push_back(&a);
    }
  }
  std::stable_sort(eligible.begin(), eligible.end(), [](const Atom* a, const Atom* b) {
    return a->boundary_distance > b->boundary_distance;
  });
  const std::size_t m = eligible.size();
  const std::size_t take = std::min(m, kMaxAtomCenters);
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t k = take == m ? i : (i * (m - 1)) / (take - 1);
    out.push_back({eligible[k]->point, eligible[k]->boundary_distance, "atom"});
  }
  return out;
}

GrowthFit classify_growth(const std::vector<GrowthRow>& rows) {
  GrowthFit fit;
  std::vector<const GrowthRow*> sorted;
  for (const auto& r : rows) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const GrowthRow* a, const GrowthRow* b) { return a->d < b->d; });
  std::size_t positive = 0;
  for (const auto* r : sorted) positive += r->value > 0.0 ? 1 : 0;
  if (positive < 3) {
    fit.verdict = Verdict::pass;
    fit.reason = "fewer than 3 nonzero rows";
    fit.used = positive;
    return fit;
  }

  const std::size_t half = (sorted.size() + 1) / 2;
  double max_deep = 0.0, max_shallow = 0.0;
  std::vector<const GrowthRow*> deep;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i < half) {
      max_deep = std::max(max_deep, sorted[i]->value);
      if (sorted[i]->value > 0.0) deep.push_back(sorted[i]);
    } else {
      max_shallow = std::max(max_shallow, sorted[i]->value);
    }
  }
  if (deep.size() < 3) {
    deep.clear();
    for (const auto* r : sorted) {
      if (r->value > 0.0) deep.push_back(r);
    }
  }
  fit.growth = max_shallow > 0.0 ? max_deep / max_shallow : 1.0;
  fit.used = deep.size();

  for (const auto* r : deep) {
    if (r->std_error > kMaxRelativeError * r->value) {
      fit.verdict = Verdict::inconclusive;
      fit.reason = "MC error dominates a ratio";
      return fit;
    }
  }

  const double m = static_cast<double>(deep.size());
  double mx = 0.0, my = 0.0;
  for (const auto* r : deep) {
    mx += std::log(r->d);
    my += std::log(r->value);
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto* r : deep) {
    const double dx = std::log(r->d) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(r->value) - my);
  }
  if (sxx <= 0.0) {
    fit.slope = 0.0;
    fit.slope_se = 0.0;
  } else {
    fit.slope = sxy / sxx;
    double rss = 0.0;
    for (const auto* r : deep) {
      const double e = std::log(r->value) - my - fit.slope * (std::log(r->d) - mx);
      rss += e * e;
    }
    fit.slope_se = m > 2.0 ? std::sqrt(rss / (m - 2.0) / sxx) : 0.0;
  }

  const bool rising = fit.slope + 2.0 * fit.slope_se < kSlopeThreshold;
  if (rising && fit.growth > 1.0) {
    fit.verdict = Verdict::fail;
    fit.reason = "values grow towards the boundary";
  } else if (fit.growth < kGrowthLimit && (fit.slope > kSlopeThreshold || fit.growth <= 1.0)) {
    fit.verdict = Verdict::pass;
    fit.reason = "bounded along the schedule";
  } else {
    fit.verdict = Verdict::inconclusive;
    fit.reason = "slope or growth ambiguous";
  }
  return fit;
}

RatioTestResult carleson_ratio_test(const Measure& mu, double r,
                                    const std::vector<ScheduleCenter>& centers,
                                    const MCConfig& mc) {
  if (!(r > 0.0 && r < 1.0)) throw ParameterError("r must lie in (0,1)");
  RatioTestResult res;
  res.r = r;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const KobayashiBall ball = kobayashi_ball(centers[i].z, r);
    const auto m = measure_of_ball(mu, ball, mc.with_label(i));
    const double vol = ball.volume();
    res.rows.push_back({centers[i].z, centers[i].d, m.value / vol, m.std_error / vol});
    res.sup = std::max(res.sup, m.value / vol);
  }
  res.fit = classify_growth(res.rows);
  return res;
}

BerezinTestResult carleson_berezin_test(const Measure& mu,
                                        const std::vector<ScheduleCenter>& probes,
                                        const MCConfig& mc) {
  BerezinTestResult res;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto b = berezin_transform(mu, probes[i].z, mc.with_label(i));
    res.rows.push_back({probes[i].z, probes[i].d, b.value, b.std_error});
    if (b.value > res.sup.value || i == 0) res.sup = b;
  }
  res.fit = classify_growth(res.rows);
  return res;
}

FunctionalTestResult carleson_functional_test(const Measure& mu,
                                              const std::vector<ScheduleCenter>& centers,
                                              std::size_t family_size, std::uint64_t seed,
                                              double p) {
  if (p != 2.0) throw ParameterError("the functional test supports p = 2 only");
  FunctionalTestResult res;
  res.constant_ratio = mu.total_mass();
  res.constant = res.constant_ratio;

  for (const auto& c : centers) {
    const double v = kernel_mass_exact(mu, c.z);
    res.kernel_rows.push_back({c.z, c.d, v, 0.0});
    res.constant = std::max(res.constant, v);
  }

  const std::size_t n = mu.dim();
  for (std::size_t i = 0; i < family_size; ++i) {
    const Polynomial P = Polynomial::random(n, 2, derive_seed(seed, i));
    double num = 0.0;
    for (const Atom& a : mu.atoms()) num += a.weight * std::norm(P(a.point));
    for (const PowerDensity& d : mu.densities()) num += d.coeff * P.weighted_norm2(d.s);
    const double ratio = num / P.norm2();
    res.polynomial_ratios.push_back(ratio);
    res.constant = std::max(res.constant, ratio);
  }
  res.fit = classify_growth(res.kernel_rows);
  return res;
}

Verdict CarlesonVerdict::overall() const {
  if (!agreement) return Verdict::inconclusive;
  for (Verdict v : {functional, berezin, ratio}) {
    if (v != Verdict::inconclusive) return v;
  }
  return Verdict::inconclusive;
}

nlohmann::json CarlesonVerdict::to_json() const {
  nlohmann::json ratio_j = nlohmann::json::object();
  for (const auto& [r, sup] : ratio_sup) {
    ratio_j[std::to_string(r)] = {{"sup", sup}, {"fit", fit_json(ratio_fits.at(r))}};
  }
  return {{"verdict", to_string(overall())},
          {"agreement", agreement},
          {"functional",
           {{"verdict", to_string(functional)},
            {"constant", functional_constant},
            {"fit", fit_json(functional_fit)}}},
          {"berezin",
           {{"verdict", to_string(berezin)},
            {"sup", berezin_sup.value},
            {"std_error", berezin_sup.std_error},
            {"fit", fit_json(berezin_fit)},
            {"rows", rows_json(berezin_rows)}}},
          {"ratio", {{"verdict", to_string(ratio)}, {"by_radius", ratio_j}}}};
}

CarlesonVerdict cross_check_equivalence(const Measure& mu, const CarlesonConfig& cfg) {
  CarlesonVerdict v;
  v.centers = boundary_schedule(mu, cfg.kmax, false);
  std::vector<ScheduleCenter> probes = v.centers;
  probes.insert(probes.begin(), {Point(mu.dim()), 1.0, "origin"});

  const auto fn = carleson_functional_test(mu, v.centers, cfg.polynomial_family,
                                           derive_seed(cfg.mc.seed, 11));
  v.functional = fn.fit.verdict;
  v.functional_fit = fn.fit;
  v.functional_constant = fn.constant;

  const auto bz = carleson_berezin_test(mu, probes, cfg.mc.with_label(2));
  v.berezin = bz.fit.verdict;
  v.berezin_fit = bz.fit;
  v.berezin_sup = bz.sup;
  v.berezin_rows = bz.rows;

  bool first = true;
  for (std::size_t i = 0; i < cfg.radii.size(); ++i) {
    const double r = cfg.radii[i];
    const auto rt = carleson_ratio_test(mu, r, v.centers, cfg.mc.with_label(3 + i));
    v.ratio_sup[r] = rt.sup;
    v.ratio_fits[r] = rt.fit;
    v.ratio_rows[r] = rt.rows;
    v.ratio = first ? rt.fit.verdict : worst_of(v.ratio, rt.fit.verdict);
    first = false;
  }

  v.agreement = true;
  Verdict seen = Verdict::inconclusive;
  for (Verdict x : {v.functional, v.berezin, v.ratio}) {
    if (x == Verdict::inconclusive) continue;
    if (seen == Verdict::inconclusive) {
      seen = x;
    } else if (x != seen) {
      v.agreement = false;
    }
  }
  return v;
}

}  // namespace carleson
