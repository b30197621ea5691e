#include "verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>

#include "bundle.hpp"
#include "carleson/ball.hpp"
#include "carleson/cover.hpp"
#include "carleson/domains.hpp"
#include "carleson/errors.hpp"
#include "carleson/integrate.hpp"
#include "carleson/invariant_measure.hpp"
#include "carleson/measures.hpp"
#include "carleson/rng.hpp"
#include "carleson/sequences.hpp"

namespace carleson::cli {

namespace {

using nlohmann::json;

constexpr double kLi2InvE = 0.40875428352694773;  // Li_2(1/e)

struct Plan {
  bool full = false;
  std::vector<std::size_t> dims;
  std::size_t mc_samples = 0;
  std::size_t samples = 0;
  std::size_t clouds = 0;
  std::size_t probes = 0;
};

Plan plan_for(const std::string& suite) {
  if (suite == "quick") return {false, {1}, 100000, 10000, 100, 10000};
  if (suite == "full") return {true, {1, 2}, 100000, 10000, 100, 10000};
  throw ParameterError("suite must be quick or full");
}

CheckReport make_report(std::string check, double statistic, double bound, bool ok,
                        std::size_t n_samples, std::uint64_t seed, json details = json::object()) {
  CheckReport r;
  r.check = std::move(check);
  r.statistic = statistic;
  r.bound = bound;
  r.verdict = ok ? Verdict::pass : Verdict::fail;
  r.n_samples = n_samples;
  r.seed = seed;
  r.details = std::move(details);
  return r;
}

/// Folds several reports of one check into a row: worst verdict, extreme
/// statistic (largest or smallest), and the parts in the details.
CheckReport fold(std::string check, const std::vector<CheckReport>& parts, bool take_max) {
  CheckReport r;
  r.check = std::move(check);
  r.verdict = Verdict::pass;
  r.statistic = take_max ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity();
  json items = json::array();
  for (const auto& p : parts) {
    r.verdict = worst_of(r.verdict, p.verdict);
    const bool better = take_max ? p.statistic > r.statistic : p.statistic < r.statistic;
    if (better) {
      r.statistic = p.statistic;
      r.bound = p.bound;
      r.std_error = p.std_error;
    }
    r.n_samples += p.n_samples;
    r.seed = p.seed;
    items.push_back({{"statistic", p.statistic}, {"verdict", to_string(p.verdict)}});
  }
  r.details = {{"parts", items}};
  return r;
}

class Runner {
 public:
  explicit Runner(VerifyResult& res) : res_(res) {}

  void row(const std::string& lemma, const std::function<CheckReport()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckReport rep;
    try {
      rep = f();
    } catch (const std::exception& e) {
      rep.check = "error";
      rep.verdict = Verdict::fail;
      rep.details = {{"error", e.what()}};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res_.rows.push_back({lemma, std::move(rep), secs});
  }

 private:
  VerifyResult& res_;
};

Point radial(std::size_t n, double d) { return Point::basis(n, 0, 1.0 - d); }

MCConfig mc_for(const Plan& plan, std::uint64_t seed, std::uint64_t label) {
  MCConfig mc;
  mc.seed = derive_seed(seed, label);
  mc.n_samples = plan.mc_samples;
  return mc;
}

// ------------------------------------------------------------ section 1

void section_one(Runner& run, const Plan& plan, std::uint64_t seed) {
  run.row("1.1", [&] {
    std::vector<CheckReport> parts;
    for (std::size_t n : plan.dims) {
      parts.push_back(
          check_volume_sandwich(n, {0.0, 0.5, 0.9, 0.99}, {0.1, 0.3, 0.5, 0.7, 0.9}));
    }
    return fold("volume_sandwich", parts, false);
  });

  run.row("1.2", [&] {
    std::vector<CheckReport> parts;
    for (std::size_t n : plan.dims) {
      parts.push_back(check_distance_comparison(UnitBallDomain(n), radial(n, 0.1), 0.5,
                                                plan.samples, derive_seed(seed, 12)));
    }
    parts.push_back(check_distance_comparison(EllipsoidDomain({1.0, 1.0, 0.8, 0.8}),
                                              Point::basis(2, 1, 0.7), 0.5, plan.samples,
                                              derive_seed(seed, 13)));
    return fold("distance_comparison", parts, true);
  });

  run.row("1.3", [&] {
    std::vector<CheckReport> parts;
    for (std::size_t n : plan.dims) {
      for (double d : {0.5, 0.1, 0.01}) {
        parts.push_back(
            check_lemma_ball_inequality(radial(n, d), 0.5, plan.samples, derive_seed(seed, 14)));
      }
    }
    return fold("ball_inequality", parts, false);
  });

  run.row("1.4", [&] {
    std::vector<CheckReport> parts;
    for (std::size_t n : plan.dims) {
      parts.push_back(check_defining_fn_inequality(UnitBallDomain(n), radial(n, 0.1), 0.5,
                                                   plan.samples, derive_seed(seed, 15)));
    }
    parts.push_back(check_defining_fn_inequality(EllipsoidDomain({1.0, 1.0, 0.8, 0.8}),
                                                 Point::basis(2, 1, 0.7), 0.5, plan.samples,
                                                 derive_seed(seed, 16)));
    return fold("defining_fn_inequality", parts, false);
  });
  run.row("1.4", [&] {
    const std::vector<double> radii{0.5, 0.7, 0.9, 0.95, 0.99};
    std::vector<CheckReport> parts;
    for (std::size_t n : plan.dims) {
      parts.push_back(check_defining_fn_scaling(UnitBallDomain(n), radial(n, 0.1), radii,
                                                plan.samples, derive_seed(seed, 17)));
    }
    parts.push_back(check_defining_fn_scaling(EllipsoidDomain({1.0, 1.0, 0.8, 0.8}),
                                              Point::basis(2, 1, 0.7), radii, plan.samples,
                                              derive_seed(seed, 17)));
    return fold("defining_fn_scaling", parts, true);
  });

  run.row("1.5", [&] {
    std::vector<CheckReport> parts;
    for (std::size_t n : plan.dims) {
      const auto c = greedy_cover(n, 0.1, 0.5, derive_seed(seed, 18));
      parts.push_back(make_report("cover", static_cast<double>(c.multiplicity_refined),
                                  static_cast<double>(c.multiplicity + 1),
                                  c.covered() && c.disjoint() && c.stable(), c.probes, seed,
                                  c.to_json()));
    }
    return fold("cover", parts, true);
  });

  // Submean checks at several depths; rows 1.7 and 1.8 read the fitted
  // constants from the same runs.
  std::vector<CheckReport> sub;
  run.row("1.6", [&] {
    std::uint64_t label = 20;
    for (std::size_t n : plan.dims) {
      const Polynomial f = Polynomial::random(n, 2, derive_seed(seed, 19));
      for (double d : {0.5, 0.1, 0.01}) {
        sub.push_back(check_submean(f, radial(n, d), 0.5, mc_for(plan, seed, label++)));
      }
    }
    return fold("submean", sub, false);
  });
  const double r = 0.5;
  auto fitted = [&](const char* key, const char* check, auto bound_of) {
    double worst = 0.0, bound = std::numeric_limits<double>::infinity();
    bool ok = !sub.empty();
    for (const auto& rep : sub) {
      const double v = rep.details.value(key, std::numeric_limits<double>::quiet_NaN());
      ok = ok && std::isfinite(v) && v > 0.0;
      worst = std::max(worst, v);
    }
    for (std::size_t n : plan.dims) bound = std::min(bound, bound_of(static_cast<double>(n)));
    return make_report(check, worst, bound, ok && worst <= bound, sub.size(), seed);
  };
  // chi(z0) nu(B) / int_B chi <= 4^{n+1} nu(B) / (r^{2n} d^{n+1}) <= (8/(1-r^2))^{n+1}.
  run.row("1.7", [&] {
    return fitted("fitted_C3", "submean_constant", [&](double n) {
      return std::pow(8.0 / (1.0 - r * r), n + 1.0);
    });
  });
  // Submean at z in B(z0,r) with radius (R-r)/(1-rR), R = (1+r)/2, inside B(z0,R).
  run.row("1.8", [&] {
    return fitted("fitted_K", "submean_sup_constant", [&](double n) {
      const double R = 0.5 * (1.0 + r);
      const double rr = (R - r) / (1.0 - r * R);
      return std::pow(4.0, n + 1.0) * std::pow(r / rr, 2.0 * n) *
             std::pow(2.0 / ((1.0 - r) * (1.0 - r)), n + 1.0);
    });
  });
}

// ------------------------------------------------------------ section 2

void section_two(Runner& run, const Plan& plan, std::uint64_t seed, const KernelFn& K) {
  run.row("2.1", [&] {
    std::vector<double> grid;
    for (int i = 0; i < 1000; ++i) grid.push_back(0.999 * i / 999.0);
    std::vector<CheckReport> parts;
    for (std::size_t n : plan.dims) parts.push_back(check_kernel_upper(n, grid));
    return fold("kernel_upper", parts, true);
  });

  run.row("2.1", [&] {
    std::vector<CheckReport> parts;
    std::uint64_t label = 40;
    for (std::size_t n : plan.dims) {
      std::vector<Point> zs{Point(n), Point::basis(n, 0, 0.3)};
      if (n >= 2) zs.push_back(Point::basis(n, 1, 0.5));
      for (const Point& z : zs) {
        for (const auto& alpha : multi_indices(n, 2)) {
          parts.push_back(check_reproducing(z, alpha, mc_for(plan, seed, label++), K));
        }
      }
    }
    return fold("reproducing", parts, true);
  });

  run.row("2.1", [&] {
    std::vector<CheckReport> parts;
    std::uint64_t label = 60;
    for (std::size_t n : plan.dims) {
      parts.push_back(check_diagonal_identity(Point::basis(n, 0, 0.3), mc_for(plan, seed, label++)));
    }
    return fold("diagonal_identity", parts, true);
  });

  // |K(z,z0)| d^{n+1} >= sqrt(c7 / 2^{n+1}) from |K|^2 = |k_z0|^2 K(z0,z0)
  // and 1 - |z0|^2 <= 2d.
  run.row("2.2", [&] {
    const double r = 0.5;
    double worst = std::numeric_limits<double>::infinity();
    double bound = 0.0;
    bool ok = true;
    std::size_t count = 0;
    for (std::size_t n : plan.dims) {
      const double n1 = static_cast<double>(n + 1);
      const double c7 = std::pow((1.0 - r) * (1.0 - r) * (1.0 + r) / 16.0, n1);
      const double c5 = std::sqrt(c7 / std::pow(2.0, n1));
      bound = c5;
      std::uint64_t label = 70;
      for (double d : {0.5, 0.1, 0.01, 0.001}) {
        const Point z0 = radial(n, d);
        for (const Point& z : sample_ball_uniform(kobayashi_ball(z0, r), plan.samples,
                                                  derive_seed(seed, label++))) {
          const double v = std::abs(K(z, z0)) * std::pow(d, n1);
          worst = std::min(worst, v / c5);
          ok = ok && v >= c5;
          ++count;
        }
      }
    }
    return make_report("kernel_lower_K", worst, 1.0, ok, count, seed, {{"c5", bound}});
  });

  run.row("2.3", [&] {
    std::vector<CheckReport> parts;
    for (std::size_t n : plan.dims) {
      std::vector<Point> centers;
      for (double d : {0.5, 0.1, 0.01, 0.001}) centers.push_back(radial(n, d));
      parts.push_back(check_kernel_lower(centers, 0.5, plan.samples, derive_seed(seed, 80)));
    }
    return fold("kernel_lower", parts, false);
  });

  struct Case {
    std::string label;
    Measure mu;
    Verdict expected;
  };
  std::vector<Case> cases;
  for (std::size_t n : plan.dims) {
    const std::string tag = "_n" + std::to_string(n);
    for (double s : {-0.5, 0.0, 0.5, 1.0}) {
      if (!plan.full && (s == 0.5 || s == 0.0)) continue;
      std::ostringstream os;
      os << "power_" << s << tag;
      cases.push_back({os.str(), Measure::power(n, s), s < 0.0 ? Verdict::fail : Verdict::pass});
    }
    cases.push_back({"nu" + tag, Measure::lebesgue(n), Verdict::pass});
    cases.push_back({"dirac_ladder" + tag, dirac_carleson_measure(radial_ladder(n, 24)),
                     Verdict::pass});
  }
  std::uint64_t label = 100;
  for (const auto& c : cases) {
    run.row("2.4", [&] {
      CarlesonConfig cfg;
      cfg.mc = mc_for(plan, seed, label++);
      const auto v = cross_check_equivalence(c.mu, cfg);
      const bool ok = v.agreement && v.overall() == c.expected;
      return make_report("equivalence:" + c.label, v.berezin_fit.slope, -0.1, ok,
                         cfg.mc.n_samples, cfg.mc.seed,
                         {{"functional", to_string(v.functional)},
                          {"berezin", to_string(v.berezin)},
                          {"ratio", to_string(v.ratio)},
                          {"agreement", v.agreement},
                          {"expected", to_string(c.expected)}});
    });
  }
}

// ------------------------------------------------------------ section 3

void section_three(Runner& run, const Plan& plan, std::uint64_t seed) {
  run.row("3.1", [&] {
    double worst = 0.0;
    bool ok = true;
    const double r = 0.5;
    for (std::size_t c = 0; c < plan.clouds; ++c) {
      const std::size_t n = plan.dims[c % plan.dims.size()];
      const PointSequence G(sample_unit_ball(n, 500, derive_seed(seed, 200 + c)));
      const auto dec = greedy_decompose(G, r);
      for (const auto& cls : dec.classes()) {
        for (std::size_t a = 0; a < cls.size(); ++a) {
          for (std::size_t b = a + 1; b < cls.size(); ++b) ok = ok && G.distance(cls[a], cls[b]) >= r;
        }
      }
      const double ratio = static_cast<double>(dec.n_colors) /
                           static_cast<double>(max_self_count(G, r));
      worst = std::max(worst, ratio);
    }
    return make_report("decomposition", worst, 1.0, ok && worst <= 1.0, plan.clouds * 500, seed);
  });

  const auto bundle = bundled_sequences(plan.full, derive_seed(seed, 300));
  std::uint64_t label = 310;
  for (const auto& b : bundle) {
    run.row("3.2", [&] {
      const std::size_t n = b.points.dim();
      const double r = 0.5;
      auto coarse = candidate_net(n, 1e-3, plan.probes, derive_seed(seed, label));
      auto fine = candidate_net(n, 1e-3, 4 * plan.probes, derive_seed(seed, label));
      for (auto* probes : {&coarse, &fine}) {
        probes->insert(probes->end(), b.points.points().begin(), b.points.points().end());
      }
      std::size_t m1 = 0, m2 = 0;
      for (auto c : count_in_balls(b.points, coarse, r)) m1 = std::max(m1, c);
      for (auto c : count_in_balls(b.points, fine, r)) m2 = std::max(m2, c);
      CarlesonConfig cfg;
      cfg.mc = mc_for(plan, seed, label++);
      const auto v = cross_check_equivalence(dirac_carleson_measure(b.points), cfg);
      const auto series = escape_sum(b.points, EscapeWeight::none(), EscapeExponent::n_plus_1);
      const bool stable = m2 <= m1 + 1;
      const bool ok = stable && v.overall() == Verdict::pass && (!b.tail_checked || series.cauchy());
      return make_report("chain:" + b.label, static_cast<double>(m2), static_cast<double>(m1 + 1),
                         ok, b.points.size(), seed,
                         {{"count_coarse", m1},
                          {"count_fine", m2},
                          {"carleson", to_string(v.overall())},
                          {"tail_increment", series.tail_increment},
                          {"tail_checked", b.tail_checked}});
    });
  }

  run.row("3.3", [&] {
    const auto s = escape_sum(radial_ladder(1, 50), EscapeWeight::none(), EscapeExponent::n_plus_1);
    const double exact = 1.0 / (std::exp(2.0) - 1.0);
    return make_report("dirac_mass", s.total, exact,
                       std::abs(s.total - exact) <= 1e-6 && s.cauchy(), 50, 0,
                       {{"tail_increment", s.tail_increment}});
  });

  run.row("3.4", [&] {
    const auto s = escape_sum(radial_ladder(2, 50), EscapeWeight::none(), EscapeExponent::two_n);
    const double exact = 1.0 / (std::exp(4.0) - 1.0);
    return make_report("volume_sum", s.total, exact,
                       std::abs(s.total - exact) <= 1e-6 && s.cauchy(), 50, 0,
                       {{"tail_increment", s.tail_increment}});
  });

  run.row("3.5", [&] { return check_ek_exact(1, 0.5, mc_for(plan, seed, 400)); });
  run.row("3.5", [&] {
    std::vector<CheckReport> parts;
    std::uint64_t l = 410;
    for (std::size_t n : plan.dims) {
      parts.push_back(check_ek_invariance(Point::basis(n, 0, 0.5), 0.5, 3, mc_for(plan, seed, l++)));
    }
    return fold("ek_invariance", parts, true);
  });
  run.row("3.5", [&] {
    return check_ek_two_sided(1, {0.0, 0.5, 0.9}, {0.3, 0.5, 0.7}, mc_for(plan, seed, 420));
  });
  run.row("3.5", [&] { return check_ek_inf_property(2, plan.full ? 200 : 20, derive_seed(seed, 430)); });
  run.row("3.5", [&] {
    std::vector<double> grid;
    for (int i = 0; i < 1000; ++i) grid.push_back(0.999 * i / 999.0);
    std::vector<CheckReport> parts;
    for (std::size_t n : plan.dims) parts.push_back(check_ek_sandwich(n, grid));
    return fold("ek_sandwich", parts, true);
  });

  run.row("3.6", [&] {
    const auto s = escape_sum(radial_ladder(1, 50), EscapeWeight::power(2.0), EscapeExponent::n);
    return make_report("escape_sum", s.total, kLi2InvE, std::abs(s.total - kLi2InvE) <= 1e-4, 50, 0);
  });
  for (const auto& b : bundle) {
    run.row("3.6", [&] {
      const auto sc = shell_counts(b.points, Point(b.points.dim()), b.horizon, b.first_shell);
      return make_report("shells:" + b.label, sc.slope, sc.bound, sc.within_bound(),
                         b.points.size(), seed,
                         {{"counts", sc.counts}, {"first_shell", sc.first_shell},
                          {"last_shell", sc.last_shell}});
    });
  }
}

std::string cell(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  return format_double(v);
}

}  // namespace

Verdict VerifyResult::overall() const {
  Verdict v = Verdict::pass;
  for (const auto& r : rows) v = worst_of(v, r.report.verdict);
  return v;
}

CsvTable VerifyResult::csv() const {
  CsvTable t;
  t.header = {"lemma", "check", "statistic", "bound", "verdict", "n_samples", "std_error", "seed"};
  for (const auto& r : rows) {
    const auto& p = r.report;
    t.add({r.lemma, p.check, cell(p.statistic), cell(p.bound), to_string(p.verdict),
           std::to_string(p.n_samples), cell(p.std_error), std::to_string(p.seed)});
  }
  return t;
}

json VerifyResult::to_json(bool with_timings) const {
  json rows_json = json::array();
  for (const auto& r : rows) {
    json j = carleson::to_json(r.report);
    j["lemma"] = r.lemma;
    if (with_timings) j["seconds"] = r.seconds;
    rows_json.push_back(std::move(j));
  }
  return {{"suite", suite}, {"seed", seed}, {"verdict", to_string(overall())}, {"rows", rows_json}};
}

std::string VerifyResult::text() const {
  std::ostringstream os;
  os << std::left << std::setw(6) << "lemma" << std::setw(34) << "check" << std::setw(14)
     << "statistic" << std::setw(14) << "bound" << "verdict\n";
  for (const auto& r : rows) {
    std::ostringstream stat, bound;
    stat << std::setprecision(6) << r.report.statistic;
    bound << std::setprecision(6) << r.report.bound;
    os << std::setw(6) << r.lemma << std::setw(34) << r.report.check << std::setw(14) << stat.str()
       << std::setw(14) << bound.str() << to_string(r.report.verdict) << "\n";
  }
  os << "overall: " << to_string(overall()) << "\n";
  return os.str();
}

VerifyResult run_verify(const VerifyOptions& opts) {
  const Plan plan = plan_for(opts.suite);
  VerifyResult res;
  res.suite = opts.suite;
  res.seed = opts.seed;
  Runner run(res);
  section_one(run, plan, opts.seed);
  section_two(run, plan, opts.seed, opts.kernel);
  section_three(run, plan, opts.seed);
  return res;
}

}  // namespace carleson::cli
