#include "ops.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>

#include "carleson/ball.hpp"
#include "carleson/bergman.hpp"
#include "carleson/cover.hpp"
#include "carleson/domains.hpp"
#include "carleson/errors.hpp"
#include "carleson/invariant_measure.hpp"
#include "carleson/measures.hpp"
#include "carleson/sequences.hpp"
#include "spec.hpp"
#include "verify.hpp"

namespace carleson::cli {

namespace {

using nlohmann::json;

// ----------------------------------------------------------------- params

class Params {
 public:
  Params(const json& params, std::size_t n) : p_(params), n_(n) {}
  Params(const ExperimentSpec& spec, std::size_t n) : Params(spec.params, n) {}

  std::size_t n() const { return n_; }
  bool has(const std::string& k) const { return p_.contains(k); }

  double num(const std::string& k, double def) const {
    return has(k) ? get<double>(k) : def;
  }
  std::size_t count(const std::string& k, std::size_t def) const {
    return has(k) ? get<std::size_t>(k) : def;
  }
  std::string str(const std::string& k, const std::string& def) const {
    return has(k) ? get<std::string>(k) : def;
  }
  std::vector<double> list(const std::string& k, std::vector<double> def) const {
    return has(k) ? get<std::vector<double>>(k) : def;
  }
  Point point(const std::string& k, Point def) const {
    return has(k) ? to_point(p_.at(k), k) : def;
  }
  std::vector<Point> points(const std::string& k) const {
    std::vector<Point> out;
    if (!p_.at(k).is_array()) throw ParameterError("param '" + k + "' must be a list of points");
    for (const auto& item : p_.at(k)) out.push_back(to_point(item, k));
    return out;
  }
  const json& raw(const std::string& k) const { return p_.at(k); }

  /// 2n reals are interleaved (re, im) pairs; n reals are real coordinates.
  Point to_point(const json& j, const std::string& k) const {
    std::vector<double> v;
    try {
      v = j.get<std::vector<double>>();
    } catch (const json::exception&) {
      throw ParameterError("param '" + k + "' must be a list of numbers");
    }
    if (v.size() == 2 * n_) return Point::from_real(v);
    if (v.size() == n_) {
      Point z(n_);
      for (std::size_t i = 0; i < n_; ++i) z[i] = cplx{v[i], 0.0};
      return z;
    }
    throw ParameterError("param '" + k + "' needs " + std::to_string(n_) + " or " +
                         std::to_string(2 * n_) + " reals");
  }

 private:
  template <class T>
  T get(const std::string& k) const {
    try {
      return p_.at(k).get<T>();
    } catch (const json::exception&) {
      throw ParameterError("param '" + k + "' has the wrong type");
    }
  }

  const json& p_;
  std::size_t n_;
};

std::string fmt(double v) { return format_double(v); }

std::vector<std::string> point_header(std::size_t n, const std::string& prefix = "") {
  std::vector<std::string> h;
  for (std::size_t j = 1; j <= n; ++j) {
    h.push_back(prefix + "re" + std::to_string(j));
    h.push_back(prefix + "im" + std::to_string(j));
  }
  return h;
}

std::vector<std::string> point_cells(const Point& z) {
  std::vector<std::string> c;
  for (double v : z.to_real()) c.push_back(fmt(v));
  return c;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

OpResult points_result(const std::vector<Point>& pts, std::size_t n) {
  OpResult r;
  r.table.header = point_header(n);
  for (const auto& p : pts) r.table.add(point_cells(p));
  r.summary = {{"count", pts.size()}};
  return r;
}

OpResult report_result(const CheckReport& rep) {
  OpResult r;
  r.verdict = rep.verdict;
  r.table.header = {"check", "statistic", "bound", "verdict", "n_samples", "std_error", "seed"};
  r.table.add({rep.check, fmt(rep.statistic), fmt(rep.bound), to_string(rep.verdict),
               std::to_string(rep.n_samples), fmt(rep.std_error), std::to_string(rep.seed)});
  r.summary = to_json(rep);
  return r;
}

std::unique_ptr<Domain> make_domain(const ExperimentSpec& spec) {
  if (spec.domain.is_null()) return std::make_unique<UnitBallDomain>(spec.n);
  auto D = domain_from_json(spec.domain);
  if (D->dim() != spec.n) throw ValidationError("domain dimension differs from n");
  return D;
}

PointSequence make_sequence(const ExperimentSpec& spec) {
  const json& s = spec.sequence;
  const Params p(s, spec.n);
  const std::string gen = s.at("generator").get<std::string>();
  const std::uint64_t seed = s.value("seed", spec.mc.seed);
  const Metric metric = metric_from_string(s.value("metric", std::string("pseudohyperbolic")));
  PointSequence G;
  if (gen == "ladder") {
    std::optional<Point> u;
    if (s.contains("u")) u = p.to_point(s.at("u"), "u");
    G = radial_ladder(spec.n, static_cast<int>(p.count("M", 24)), u);
  } else if (gen == "packing") {
    G = maximal_packing(spec.n, p.num("delta", 0.5), p.num("eps", 0.01),
                        p.count("candidates", 20000), seed);
  } else if (gen == "lattice") {
    if (spec.n != 1) throw ParameterError("the lattice generator is defined for n = 1");
    G = perturbed_lattice(static_cast<int>(p.count("levels", 8)), p.num("jitter", 0.1), seed);
  } else if (gen == "file") {
    G = PointSequence(read_points_csv(s.at("path").get<std::string>()), metric);
  } else {
    G = PointSequence(p.points("points"), metric);
  }
  if (!G.empty() && G.dim() != spec.n) throw ValidationError("sequence dimension differs from n");
  if (metric != G.metric()) {
    G = PointSequence(G.points(), metric, G.boundary_distances());
  }
  return G;
}

Measure make_measure(const ExperimentSpec& spec) {
  json m = spec.measure;
  if (m.is_object() && m.value("from_sequence", false)) {
    if (spec.sequence.is_null()) throw ValidationError("measure.from_sequence needs a sequence");
    return dirac_carleson_measure(make_sequence(spec));
  }
  return measure_from_json(m, spec.n);
}

std::vector<ScheduleCenter> probes_from(const Params& p, const std::vector<double>& def_depths) {
  std::vector<ScheduleCenter> out;
  if (p.has("probes")) {
    for (const Point& z : p.points("probes")) out.push_back({z, 1.0 - z.norm(), "probe"});
    return out;
  }
  for (double d : p.list("depths", def_depths)) {
    if (!(d > 0.0 && d <= 1.0)) throw ParameterError("depths must lie in (0, 1]");
    out.push_back({Point::basis(p.n(), 0, 1.0 - d), d, "radial"});
  }
  return out;
}

void add_growth_rows(OpResult& r, const std::string& test, double radius,
                     const std::vector<GrowthRow>& rows) {
  for (const auto& row : rows) {
    r.table.add({test, fmt(radius), fmt(row.d), fmt(row.value), fmt(row.std_error)});
  }
}

json fit_json(const GrowthFit& f) {
  return {{"slope", f.slope},         {"slope_se", f.slope_se}, {"growth", f.growth},
          {"used", f.used},           {"verdict", to_string(f.verdict)},
          {"reason", f.reason}};
}

CarlesonConfig carleson_config(const ExperimentSpec& spec, const Params& p) {
  CarlesonConfig cfg;
  cfg.radii = p.list("radii", cfg.radii);
  cfg.kmax = static_cast<int>(p.count("kmax", static_cast<std::size_t>(cfg.kmax)));
  cfg.polynomial_family = p.count("family_size", cfg.polynomial_family);
  cfg.mc = spec.mc;
  return cfg;
}

// -------------------------------------------------------------- executors

using Executor = std::function<OpResult(const ExperimentSpec&)>;

OpResult run_pseudo_distance(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const auto d = pseudo_distance(p.point("z", Point(s.n)), p.point("w", Point::basis(s.n, 0, 0.5)));
  OpResult r;
  r.table.header = {"rho", "kobayashi"};
  r.table.add({fmt(d.pseudo), fmt(d.kobayashi)});
  r.summary = {{"rho", d.pseudo}, {"kobayashi", d.kobayashi}};
  return r;
}

OpResult run_ball_automorphism(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const Point a = p.point("a", Point::basis(s.n, 0, 0.5));
  const Point z = p.point("z", Point::basis(s.n, 0, 0.2));
  require_in_ball(a, "ball_automorphism");
  require_in_ball(z, "ball_automorphism");
  const Point w = ball_automorphism(a, z);
  OpResult r;
  r.table.header = point_header(s.n);
  r.table.add(point_cells(w));
  r.summary = {{"image", w.to_real()}};
  return r;
}

OpResult run_kobayashi_ball(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const auto B = kobayashi_ball(p.point("z0", Point::basis(s.n, 0, 0.6)), p.num("r", 0.5));
  OpResult r;
  r.table.header = concat(point_header(s.n, "center_"), {"radial_axis", "transverse_axis", "volume"});
  r.table.add(concat(point_cells(B.center),
                     {fmt(B.radial_axis), fmt(B.transverse_axis), fmt(B.volume())}));
  r.summary = {{"center", B.center.to_real()},
               {"radial_axis", B.radial_axis},
               {"transverse_axis", B.transverse_axis},
               {"volume", B.volume()}};
  return r;
}

OpResult run_ball_volume(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const double v = ball_volume(p.point("z0", Point(s.n)), p.num("r", 0.5));
  OpResult r;
  r.table.header = {"volume"};
  r.table.add({fmt(v)});
  r.summary = {{"volume", v}};
  return r;
}

OpResult run_sample_ball_uniform(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const auto B = kobayashi_ball(p.point("z0", Point(s.n)), p.num("r", 0.5));
  return points_result(sample_ball_uniform(B, p.count("count", 1000), s.mc.seed), s.n);
}

OpResult run_ball_inequality(const ExperimentSpec& s) {
  const Params p(s, s.n);
  return report_result(check_lemma_ball_inequality(p.point("z0", Point::basis(s.n, 0, 0.5)),
                                                   p.num("r", 0.5), p.count("samples", 10000),
                                                   s.mc.seed));
}

OpResult run_boundary_distance(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const auto D = make_domain(s);
  const double d = D->boundary_distance(p.point("z", Point(s.n)));
  OpResult r;
  r.table.header = {"boundary_distance"};
  r.table.add({fmt(d)});
  r.summary = {{"domain", D->to_json()}, {"boundary_distance", d}};
  return r;
}

OpResult run_kobayashi_bounds(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const auto D = make_domain(s);
  const auto b = kobayashi_bounds(*D, p.point("z", Point(s.n)), p.point("w", Point::basis(s.n, 0, 0.5)));
  OpResult r;
  r.table.header = {"lower", "upper", "upper_found", "upper_method"};
  r.table.add({fmt(b.lower), fmt(b.upper), b.upper_found ? "true" : "false", b.upper_method});
  r.summary = {{"lower", b.lower}, {"upper", b.upper}, {"upper_found", b.upper_found},
               {"upper_method", b.upper_method}};
  return r;
}

OpResult run_boundary_constants(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const auto D = make_domain(s);
  const Point z0 = p.point("z0", Point(s.n));
  std::vector<Point> probes;
  if (p.has("probes")) {
    probes = p.points("probes");
  } else {
    // Approach the boundary point nearest to the direction e_1.
    const Point b = D->nearest_boundary(Point::basis(s.n, 0, 1e-3));
    for (int k = 1; k <= static_cast<int>(p.count("levels", 10)); ++k) {
      probes.push_back(z0 + (b - z0) * cplx{1.0 - std::ldexp(1.0, -k), 0.0});
    }
  }
  const auto est = estimate_boundary_constants(*D, z0, probes);
  OpResult r;
  r.table.header = {"c0", "C0", "probes"};
  r.table.add({fmt(est.c0), fmt(est.C0), std::to_string(probes.size())});
  r.summary = {{"c0", est.c0}, {"C0", est.C0}, {"probes", probes.size()}};
  return r;
}

OpResult run_distance_comparison(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const auto D = make_domain(s);
  return report_result(check_distance_comparison(*D, p.point("z0", Point::basis(s.n, 0, 0.5)),
                                                 p.num("r", 0.5), p.count("samples", 10000),
                                                 s.mc.seed));
}

OpResult run_defining_fn(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const auto D = make_domain(s);
  return report_result(check_defining_fn_inequality(*D, p.point("z0", Point::basis(s.n, 0, 0.5)),
                                                    p.num("r", 0.5), p.count("samples", 10000),
                                                    s.mc.seed));
}

OpResult run_kernel(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const cplx k = kernel(p.point("z", Point::basis(s.n, 0, 0.6)), p.point("w", Point::basis(s.n, 0, 0.6)));
  OpResult r;
  r.table.header = {"re", "im", "abs"};
  r.table.add({fmt(k.real()), fmt(k.imag()), fmt(std::abs(k))});
  r.summary = {{"re", k.real()}, {"im", k.imag()}, {"abs", std::abs(k)}};
  return r;
}

OpResult run_normalized_kernel(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const Point z0 = p.point("z0", Point::basis(s.n, 0, 0.6));
  const Point z = p.point("z", Point(s.n));
  const cplx k = normalized_kernel(z0, z);
  const double sq = normalized_kernel_sq(z0, z);
  OpResult r;
  r.table.header = {"re", "im", "abs2"};
  r.table.add({fmt(k.real()), fmt(k.imag()), fmt(sq)});
  r.summary = {{"re", k.real()}, {"im", k.imag()}, {"abs2", sq}};
  return r;
}

OpResult run_berezin(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const Measure mu = make_measure(s);
  const auto probes = probes_from(p, {0.5, 0.1, 0.01});
  OpResult r;
  r.table.header = concat(point_header(s.n, "probe_"), {"d", "value", "std_error", "exact"});
  json rows = json::array();
  std::uint64_t label = 0;
  for (const auto& c : probes) {
    const auto est = berezin_transform(mu, c.z, s.mc.with_label(label++));
    const double exact = kernel_mass_exact(mu, c.z);
    r.table.add(concat(point_cells(c.z), {fmt(c.d), fmt(est.value), fmt(est.std_error), fmt(exact)}));
    rows.push_back({{"d", c.d}, {"value", est.value}, {"std_error", est.std_error}, {"exact", exact}});
  }
  r.summary = {{"probes", rows}};
  return r;
}

OpResult run_kernel_upper(const ExperimentSpec& s) {
  const Params p(s, s.n);
  std::vector<double> grid;
  for (int i = 0; i < 1000; ++i) grid.push_back(0.999 * i / 999.0);
  return report_result(check_kernel_upper(s.n, p.list("radii", grid)));
}

OpResult run_kernel_lower(const ExperimentSpec& s) {
  const Params p(s, s.n);
  std::vector<Point> centers;
  for (const auto& c : probes_from(p, {0.5, 0.1, 0.01, 0.001})) centers.push_back(c.z);
  return report_result(
      check_kernel_lower(centers, p.num("r", 0.5), p.count("samples", 10000), s.mc.seed));
}

OpResult run_submean(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const Polynomial f =
      Polynomial::random(s.n, static_cast<int>(p.count("degree", 2)), derive_seed(s.mc.seed, 5));
  return report_result(
      check_submean(f, p.point("z0", Point::basis(s.n, 0, 0.3)), p.num("r", 0.5), s.mc));
}

OpResult run_measure_of_ball(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const Measure mu = make_measure(s);
  const auto B = kobayashi_ball(p.point("z0", Point(s.n)), p.num("r", 0.5));
  const auto est = measure_of_ball(mu, B, s.mc);
  OpResult r;
  r.table.header = {"value", "std_error", "ball_volume", "ratio"};
  r.table.add({fmt(est.value), fmt(est.std_error), fmt(B.volume()), fmt(est.value / B.volume())});
  r.summary = {{"value", est.value}, {"std_error", est.std_error}, {"ball_volume", B.volume()}};
  return r;
}

OpResult growth_result(const std::string& test, double radius, const std::vector<GrowthRow>& rows,
                       const GrowthFit& fit) {
  OpResult r;
  r.verdict = fit.verdict;
  r.table.header = {"test", "r", "d", "value", "std_error"};
  add_growth_rows(r, test, radius, rows);
  r.summary = {{"test", test}, {"fit", fit_json(fit)}};
  return r;
}

OpResult run_ratio_test(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const Measure mu = make_measure(s);
  const double radius = p.num("r", 0.5);
  const auto res = carleson_ratio_test(
      mu, radius, boundary_schedule(mu, static_cast<int>(p.count("kmax", 12))), s.mc);
  auto r = growth_result("ratio", radius, res.rows, res.fit);
  r.summary["sup"] = res.sup;
  return r;
}

OpResult run_berezin_test(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const Measure mu = make_measure(s);
  auto probes = boundary_schedule(mu, static_cast<int>(p.count("kmax", 12)), true);
  const auto res = carleson_berezin_test(mu, probes, s.mc);
  auto r = growth_result("berezin", 0.0, res.rows, res.fit);
  r.summary["sup"] = {{"value", res.sup.value}, {"std_error", res.sup.std_error}};
  return r;
}

OpResult run_functional_test(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const Measure mu = make_measure(s);
  const double power = p.num("p", 2.0);
  const auto res = carleson_functional_test(
      mu, boundary_schedule(mu, static_cast<int>(p.count("kmax", 12))),
      p.count("family_size", 10), s.mc.seed, power);
  auto r = growth_result("functional", 0.0, res.kernel_rows, res.fit);
  r.summary["constant"] = res.constant;
  r.summary["constant_ratio"] = res.constant_ratio;
  r.summary["polynomial_ratios"] = res.polynomial_ratios;
  return r;
}

OpResult run_cross_check(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const Measure mu = make_measure(s);
  const auto v = cross_check_equivalence(mu, carleson_config(s, p));
  OpResult r;
  r.verdict = v.overall();
  r.table.header = {"test", "r", "d", "value", "std_error"};
  add_growth_rows(r, "berezin", 0.0, v.berezin_rows);
  for (const auto& [radius, rows] : v.ratio_rows) add_growth_rows(r, "ratio", radius, rows);
  r.summary = v.to_json();
  return r;
}

OpResult run_separation(const ExperimentSpec& s) {
  const PointSequence G = make_sequence(s);
  const double sep = separation_constant(G);
  OpResult r;
  r.table.header = {"points", "metric", "separation"};
  r.table.add({std::to_string(G.size()), to_string(G.metric()), fmt(sep)});
  r.summary = {{"points", G.size()}, {"metric", to_string(G.metric())}, {"separation", sep}};
  return r;
}

OpResult run_count_in_ball(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const PointSequence G = make_sequence(s);
  const double radius = p.num("r", 0.5);
  const std::size_t c = count_in_ball(G, p.point("z0", Point(s.n)), radius);
  OpResult r;
  r.table.header = {"r", "count"};
  r.table.add({fmt(radius), std::to_string(c)});
  r.summary = {{"r", radius}, {"count", c}, {"max_self_count", max_self_count(G, radius)}};
  return r;
}

OpResult run_decompose(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const PointSequence G = make_sequence(s);
  const double radius = p.num("r", 0.5);
  const auto dec = greedy_decompose(G, radius);
  const std::size_t bound = max_self_count(G, radius);
  bool separated = true;
  for (const auto& cls : dec.classes()) {
    for (std::size_t a = 0; a < cls.size() && separated; ++a) {
      for (std::size_t b = a + 1; b < cls.size(); ++b) {
        if (G.distance(cls[a], cls[b]) < radius) {
          separated = false;
          break;
        }
      }
    }
  }
  OpResult r;
  r.verdict = separated && dec.n_colors <= bound ? Verdict::pass : Verdict::fail;
  r.table.header = concat({"index"}, concat(point_header(s.n), {"class"}));
  for (std::size_t i = 0; i < G.size(); ++i) {
    r.table.add(concat({std::to_string(i)},
                       concat(point_cells(G[i]), {std::to_string(dec.color_of[i])})));
  }
  r.summary = {{"points", G.size()},     {"r", radius},
               {"n_colors", dec.n_colors}, {"max_self_count", bound},
               {"classes_separated", separated}};
  return r;
}

OpResult run_cover(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const auto D = make_domain(s);
  CoverOptions opts;
  opts.probes = p.count("probes", opts.probes);
  opts.refine_factor = p.count("refine_factor", opts.refine_factor);
  opts.polish_starts = p.count("polish_starts", opts.polish_starts);
  opts.polish_steps = p.count("polish_steps", opts.polish_steps);
  const auto res = greedy_cover(*D, p.num("eps", 0.1), p.num("r", 0.5), s.mc.seed, opts);
  OpResult r;
  r.verdict = res.covered() && res.disjoint() && res.stable() ? Verdict::pass : Verdict::fail;
  r.table.header = point_header(s.n);
  for (const auto& c : res.centers) r.table.add(point_cells(c));
  r.summary = res.to_json();
  return r;
}

OpResult run_dirac(const ExperimentSpec& s) {
  const PointSequence G = make_sequence(s);
  const Measure mu = dirac_carleson_measure(G);
  OpResult r;
  r.table.header = concat(point_header(s.n), {"weight", "boundary_distance"});
  for (const auto& a : mu.atoms()) {
    r.table.add(concat(point_cells(a.point), {fmt(a.weight), fmt(a.boundary_distance)}));
  }
  r.summary = {{"atoms", mu.atoms().size()}, {"total_mass", mu.total_mass()}};
  return r;
}

OpResult run_escape(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const PointSequence G = make_sequence(s);
  const EscapeWeight h = p.has("h") ? EscapeWeight::from_json(p.raw("h")) : EscapeWeight::none();
  const auto e = escape_exponent_from_string(p.str("exponent", "n+1"));
  const auto series = escape_sum(G, h, e);
  const double tol = p.num("tol", 1e-6);
  OpResult r;
  r.verdict = series.cauchy(tol) ? Verdict::pass : Verdict::fail;
  r.table.header = {"M", "term", "partial_sum"};
  for (std::size_t i = 0; i < series.terms.size(); ++i) {
    r.table.add({std::to_string(i + 1), fmt(series.terms[i]), fmt(series.partial_sums[i])});
  }
  r.summary = {{"total", series.total},
               {"exponent", series.exponent},
               {"weight", h.describe()},
               {"tail_increment", series.tail_increment},
               {"cauchy", series.cauchy(tol)}};
  return r;
}

OpResult run_shells(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const PointSequence G = make_sequence(s);
  std::optional<double> horizon;
  if (p.has("horizon")) horizon = p.num("horizon", 0.0);
  const auto sc = shell_counts(G, p.point("z0", Point(s.n)), horizon, p.count("first_shell", 1));
  OpResult r;
  r.verdict = sc.within_bound() ? Verdict::pass : Verdict::fail;
  r.table.header = {"m", "count"};
  for (std::size_t m = 0; m < sc.counts.size(); ++m) {
    r.table.add({std::to_string(m), std::to_string(sc.counts[m])});
  }
  r.summary = {{"slope", sc.slope},           {"bound", sc.bound},
               {"fitted", sc.fitted},         {"first_shell", sc.first_shell},
               {"last_shell", sc.last_shell}, {"within_bound", sc.within_bound()}};
  return r;
}

EKBackend backend_of(const Params& p) {
  const std::string b = p.str("backend", "bergman");
  if (b == "bergman") return EKBackend::bergman;
  if (b == "boundary_distance") return EKBackend::boundary_distance;
  throw ParameterError("backend must be bergman or boundary_distance");
}

OpResult run_ek_density(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const double v = ek_density(p.point("z", Point(s.n)), backend_of(p));
  OpResult r;
  r.table.header = {"density"};
  r.table.add({fmt(v)});
  r.summary = {{"density", v}};
  return r;
}

OpResult run_ek_ball_measure(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const double radius = p.num("r", 0.5);
  const auto est = ek_ball_measure(p.point("z0", Point(s.n)), radius, s.mc, backend_of(p));
  const double exact = ek_ball_measure_exact(s.n, radius);
  OpResult r;
  r.verdict = backend_of(p) == EKBackend::bergman && !est.within(exact) ? Verdict::fail
                                                                         : Verdict::pass;
  r.table.header = {"value", "std_error", "exact"};
  r.table.add({fmt(est.value), fmt(est.std_error), fmt(exact)});
  r.summary = {{"value", est.value}, {"std_error", est.std_error}, {"exact", exact}};
  return r;
}

OpResult run_sample_unit_ball(const ExperimentSpec& s) {
  const Params p(s, s.n);
  return points_result(sample_unit_ball(s.n, p.count("count", 1000), s.mc.seed), s.n);
}

OpResult run_integrate(const ExperimentSpec& s) {
  const Params p(s, s.n);
  const std::string integrand = p.str("integrand", "power");
  const double sp = p.num("s", 0.0);
  Integrand f;
  if (integrand == "power") {
    f = [sp](const Point& z) { return std::pow(1.0 - z.norm2(), sp); };
  } else if (integrand == "ek") {
    f = [](const Point& z) { return ek_density(z); };
  } else {
    throw ParameterError("integrand must be power or ek");
  }
  Ellipsoid region = Ellipsoid::unit_ball(s.n);
  std::optional<double> exact;
  if (p.has("r")) {
    region = kobayashi_ball(p.point("z0", Point(s.n)), p.num("r", 0.5)).ellipsoid();
    if (integrand == "ek") exact = ek_ball_measure_exact(s.n, p.num("r", 0.5));
  } else if (integrand == "power") {
    exact = Measure::power(s.n, sp).density_mass();
  }
  const auto est = integrate_density(f, region, s.mc);
  OpResult r;
  r.table.header = {"value", "std_error", "exact"};
  r.table.add({fmt(est.value), fmt(est.std_error), exact ? fmt(*exact) : ""});
  r.summary = {{"value", est.value}, {"std_error", est.std_error}};
  if (exact) {
    r.summary["exact"] = *exact;
    r.verdict = est.within(*exact) ? Verdict::pass : Verdict::fail;
  }
  return r;
}

OpResult run_verify_op(const ExperimentSpec& s) {
  const Params p(s, s.n);
  VerifyOptions opts;
  opts.suite = p.str("suite", "quick");
  opts.seed = s.mc.seed;
  const auto v = run_verify(opts);
  OpResult r;
  r.verdict = v.overall();
  r.table = v.csv();
  r.summary = v.to_json();
  return r;
}

struct Entry {
  OpInfo info;
  Executor run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = [] {
    std::vector<Entry> v;
    auto add = [&](OpInfo info, Executor run) { v.push_back({std::move(info), std::move(run)}); };
    const std::vector<std::string> none;
    add({"pseudo_distance", "geometry_ball", "ball", {"z", "w"}, false, false, true,
         "pseudohyperbolic and Kobayashi distance"},
        run_pseudo_distance);
    add({"ball_automorphism", "geometry_ball", "ball", {"a", "z"}, false, false, true,
         "involutive automorphism phi_a(z)"},
        run_ball_automorphism);
    add({"kobayashi_ball", "geometry_ball", "ball", {"z0", "r"}, false, false, true,
         "ellipsoid data of B(z0, r)"},
        run_kobayashi_ball);
    add({"ball_volume", "geometry_ball", "ball", {"z0", "r"}, false, false, true,
         "normalized volume of B(z0, r)"},
        run_ball_volume);
    add({"sample_ball_uniform", "geometry_ball", "ball", {"z0", "r", "count"}, false, false, true,
         "uniform samples of B(z0, r)"},
        run_sample_ball_uniform);
    add({"check_lemma_ball_inequality", "geometry_ball", "ball", {"z0", "r", "samples"}, false,
         false, true, "ball-model inequality on B(z0, r)"},
        run_ball_inequality);
    add({"boundary_distance", "domains", "ball", {"z"}, false, false, true,
         "distance to the boundary of the domain"},
        run_boundary_distance);
    add({"kobayashi_bounds", "domains", "ball", {"z", "w"}, false, false, true,
         "lower and upper Kobayashi distance bounds"},
        run_kobayashi_bounds);
    add({"estimate_boundary_constants", "domains", "ball", {"z0", "probes", "levels"}, false, false,
         true, "c0 and C0 of the boundary estimate"},
        run_boundary_constants);
    add({"check_distance_comparison", "domains", "ball", {"z0", "r", "samples"}, false, false, true,
         "comparison of boundary distances on B(z0, r)"},
        run_distance_comparison);
    add({"check_defining_fn_inequality", "domains", "ball", {"z0", "r", "samples"}, false, false,
         true, "defining-function inequality on B(z0, r)"},
        run_defining_fn);
    add({"kernel", "bergman", "berezin", {"z", "w"}, false, false, true, "Bergman kernel K(z, w)"},
        run_kernel);
    add({"normalized_kernel", "bergman", "berezin", {"z0", "z"}, false, false, true,
         "normalized kernel k_z0(z)"},
        run_normalized_kernel);
    add({"berezin_transform", "bergman", "berezin", {"probes", "depths"}, true, false, true,
         "Berezin transform at probes"},
        run_berezin);
    add({"check_kernel_upper", "bergman", "berezin", {"radii"}, false, false, true,
         "K(z,z) d^{n+1} <= 1 on a radial grid"},
        run_kernel_upper);
    add({"check_kernel_lower", "bergman", "berezin", {"probes", "depths", "r", "samples"}, false,
         false, true, "lower bound of |k_z0|^2 on B(z0, r)"},
        run_kernel_lower);
    add({"check_submean", "bergman", "berezin", {"degree", "z0", "r"}, false, false, true,
         "submean inequality for |f|^2"},
        run_submean);
    add({"measure_of_ball", "measures", "carleson-test", {"z0", "r"}, true, false, true,
         "mu(B(z0, r))"},
        run_measure_of_ball);
    add({"carleson_ratio_test", "measures", "carleson-test", {"r", "kmax"}, true, false, true,
         "mu(B)/nu(B) along the boundary schedule"},
        run_ratio_test);
    add({"carleson_berezin_test", "measures", "carleson-test", {"kmax"}, true, false, true,
         "Berezin transform along the boundary schedule"},
        run_berezin_test);
    add({"carleson_functional_test", "measures", "carleson-test", {"kmax", "family_size", "p"},
         true, false, true, "Carleson inequality on a test family"},
        run_functional_test);
    add({"cross_check_equivalence", "measures", "carleson-test",
         {"radii", "kmax", "family_size"}, true, false, true,
         "all three Carleson tests with an agreement flag"},
        run_cross_check);
    add({"separation_constant", "sequences", "seq analyze", none, false, true, true,
         "infimum of pairwise distances"},
        run_separation);
    add({"count_in_ball", "sequences", "seq analyze", {"z0", "r"}, false, true, true,
         "N(z0, r) and its maximum over the sequence"},
        run_count_in_ball);
    add({"dirac_carleson_measure", "sequences", "seq analyze", none, false, true, true,
         "atoms d^{n+1} at the points"},
        run_dirac);
    add({"greedy_decompose", "sequences", "seq decompose", {"r"}, false, true, true,
         "first-fit decomposition into r-separated classes"},
        run_decompose);
    add({"escape_sum", "sequences", "seq escape", {"h", "exponent", "tol"}, false, true, true,
         "partial sums of d^e h(-1/log d)"},
        run_escape);
    add({"shell_counts", "sequences", "seq shells", {"z0", "horizon", "first_shell"}, false, true,
         true, "points per Kobayashi shell and the growth slope"},
        run_shells);
    add({"greedy_cover", "sequences", "cover",
         {"eps", "r", "probes", "refine_factor", "polish_starts", "polish_steps"}, false, false, true,
         "cover of K_eps with disjoint r/3-balls"},
        run_cover);
    add({"ek_density", "invariant_measure", "ek", {"z", "backend"}, false, false, true,
         "Eisenman-Kobayashi density"},
        run_ek_density);
    add({"ek_ball_measure", "invariant_measure", "ek", {"z0", "r", "backend"}, false, false, true,
         "Eisenman-Kobayashi measure of B(z0, r)"},
        run_ek_ball_measure);
    add({"sample_unit_ball", "integrate", "ball", {"count"}, false, false, true,
         "uniform samples of the unit ball"},
        run_sample_unit_ball);
    add({"integrate_density", "integrate", "ball", {"integrand", "s", "z0", "r"}, false, false,
         true, "MC integral over the ball or a Kobayashi ball"},
        run_integrate);
    add({"verify", "cli", "verify", {"suite"}, false, false, true, "per-lemma check table"},
        run_verify_op);
    add({"run", "cli", "run", none, false, false, false, "execute a spec or manifest"}, nullptr);
    return v;
  }();
  return e;
}

}  // namespace

const std::vector<OpInfo>& op_registry() {
  static const std::vector<OpInfo> infos = [] {
    std::vector<OpInfo> v;
    for (const auto& e : entries()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

const OpInfo* find_op(const std::string& name) {
  for (const auto& info : op_registry()) {
    if (info.name == name) return &info;
  }
  return nullptr;
}

OpResult execute(const ExperimentSpec& spec) {
  for (const auto& e : entries()) {
    if (e.info.name == spec.op && e.run) return e.run(spec);
  }
  throw ValidationError("unknown op '" + spec.op + "'");
}

}  // namespace carleson::cli
