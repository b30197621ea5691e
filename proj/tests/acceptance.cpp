// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"
#include "bundle.hpp"
#include "carleson/ball.hpp"
#include "carleson/bergman.hpp"
#include "carleson/cover.hpp"
#include "carleson/integrate.hpp"
#include "carleson/invariant_measure.hpp"
#include "carleson/measures.hpp"
#include "carleson/rng.hpp"
#include "carleson/sequences.hpp"

using namespace carleson;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

MCConfig mc_with(std::size_t samples, std::uint64_t seed) {
  MCConfig mc;
  mc.n_samples = samples;
  mc.seed = seed;
  return mc;
}

Point radial(std::size_t n, double d) { return Point::basis(n, 0, 1.0 - d); }

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

// Hit-or-miss volume of B(z0, r): uniform draws in a Euclidean ball of
// radius 1.25 x the largest semi-axis around the center, membership by the
// metric. A hit beyond 0.9 of that radius means the enclosing ball is too
// small and fails the cell.
Outcome ball_volume_grid() {
  const auto t0 = Clock::now();
  const std::size_t N = 100000;
  double worst = 0.0;
  bool ok = true;
  std::size_t cells = 0;
  for (std::size_t n : {1, 2, 3}) {
    for (double x : {0.0, 0.3, 0.6, 0.9}) {
      for (double r : {0.2, 0.5, 0.8}) {
        const Point z0 = Point::basis(n, 0, x);
        const auto B = kobayashi_ball(z0, r);
        const double R = 1.25 * std::max(B.radial_axis, B.transverse_axis);
        CounterRng rng(derive_seed(7, cells), 0);
        std::size_t hits = 0;
        double reach = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
          Point z = draw_unit_ball(n, rng);
          z *= cplx{R, 0.0};
          z += B.center;
          if (z.norm2() >= 1.0) continue;
          if (pseudo_distance(z0, z).pseudo < r) {
            ++hits;
            reach = std::max(reach, (z - B.center).norm());
          }
        }
        const double p = static_cast<double>(hits) / static_cast<double>(N);
        const double scale = std::pow(R, 2.0 * static_cast<double>(n));
        const double est = p * scale;
        const double se = scale * std::sqrt(p * (1.0 - p) / static_cast<double>(N));
        const double exact = ball_volume(z0, r);
        const double z_score = se > 0.0 ? std::abs(est - exact) / se : INFINITY;
        worst = std::max(worst, z_score);
        ok = ok && z_score <= 3.0 && reach <= 0.9 * R;
        ++cells;
      }
    }
  }
  const double t = seconds_since(t0);
  ok = ok && cells == 36 && t < 30.0;
  return {ok, fmt("36 cells, max |err|/se = %.2f, %.1f s", worst, t)};
}

Outcome berezin_normalization() {
  const auto t0 = Clock::now();
  bool ok = true;
  double worst = 0.0;
  std::uint64_t seed = 20;
  for (std::size_t n : {1, 2}) {
    for (double d : {0.5, 0.1, 0.01}) {
      const auto e = berezin_transform(Measure::lebesgue(n), radial(n, d), mc_with(100000, seed++));
      worst = std::max(worst, std::abs(e.value - 1.0) / std::max(e.std_error, 1e-300));
      ok = ok && e.within(1.0);
    }
  }
  const double t = seconds_since(t0);
  ok = ok && t < 60.0;
  return {ok, fmt("max |B nu - 1|/se = %.2f, %.1f s", worst, t)};
}

Outcome reproducing() {
  bool ok = true;
  std::size_t cases = 0;
  std::uint64_t seed = 40;
  for (std::size_t n : {1, 2}) {
    for (int deg = 0; deg <= 2; ++deg) {
      for (const auto& alpha : multi_indices(n, deg)) {
        for (const Point& z : {Point::basis(n, 0, 0.3), Point::basis(n, n - 1, -0.6)}) {
          ok = ok && check_reproducing(z, alpha, mc_with(100000, seed++)).passed();
          ++cases;
        }
      }
    }
  }
  return {ok, fmt("%.0f (z, alpha) cases within 3 se", static_cast<double>(cases))};
}

Outcome equivalence() {
  const auto t0 = Clock::now();
  struct Case {
    Measure mu;
    Verdict expected;
    bool negative;
  };
  std::vector<Case> cases;
  for (std::size_t n : {1, 2}) {
    for (double s : {-0.5, 0.0, 0.5, 1.0}) {
      cases.push_back({Measure::power(n, s), s < 0.0 ? Verdict::fail : Verdict::pass, s < 0.0});
    }
    cases.push_back({Measure::lebesgue(n), Verdict::pass, false});
    cases.push_back({Measure::dirac(Point(n)), Verdict::pass, false});
    cases.push_back({dirac_carleson_measure(radial_ladder(n, 24)), Verdict::pass, false});
  }
  bool ok = true;
  double slope_err = 0.0;
  std::uint64_t seed = 60;
  for (const auto& c : cases) {
    CarlesonConfig cfg;
    cfg.mc = mc_with(20000, seed++);
    const auto v = cross_check_equivalence(c.mu, cfg);
    ok = ok && v.agreement && v.overall() == c.expected;
    if (c.negative) {
      const double e = std::abs(v.berezin_fit.slope + 0.5);
      slope_err = std::max(slope_err, e);
      ok = ok && e <= 0.15;
    }
  }
  const double t = seconds_since(t0);
  ok = ok && t < 300.0;
  return {ok, fmt("%.0f measures agree, max |slope + 0.5| = %.3f, %.1f s",
                  static_cast<double>(cases.size()), slope_err, t)};
}

Outcome kernel_estimates() {
  bool ok = true;
  std::vector<double> grid;
  for (int i = 0; i < 2000; ++i) grid.push_back(0.9995 * i / 1999.0);
  for (std::size_t n : {1, 2}) ok = ok && check_kernel_upper(n, grid).passed();
  double worst = INFINITY;
  std::uint64_t seed = 80;
  for (std::size_t n : {1, 2}) {
    std::vector<Point> centers;
    for (double d : {0.5, 0.1, 0.01, 0.001}) centers.push_back(radial(n, d));
    for (double r : {0.3, 0.5, 0.8}) {
      const auto rep = check_kernel_lower(centers, r, 10000, seed++);
      ok = ok && rep.passed();
      worst = std::min(worst, rep.statistic / rep.bound);
    }
  }
  return {ok, fmt("upper bound holds on the grid, min lower ratio / bound = %.3g", worst)};
}

Outcome decomposition() {
  const auto t0 = Clock::now();
  bool ok = true;
  const double r = 0.5;
  for (std::size_t c = 0; c < 100; ++c) {
    const std::size_t n = 1 + c % 2;
    const PointSequence G(sample_unit_ball(n, 500, derive_seed(90, c)));
    const auto dec = greedy_decompose(G, r);
    for (const auto& cls : dec.classes()) {
      for (std::size_t a = 0; a < cls.size(); ++a) {
        for (std::size_t b = a + 1; b < cls.size(); ++b) ok = ok && G.distance(cls[a], cls[b]) >= r;
      }
    }
    std::size_t max_count = 0;
    for (std::size_t j = 0; j < G.size(); ++j) {
      std::size_t k = 0;
      for (std::size_t i = 0; i < G.size(); ++i) k += G.distance(i, j) < r ? 1 : 0;
      max_count = std::max(max_count, k);
    }
    ok = ok && dec.n_colors <= max_count;
  }
  const double t = seconds_since(t0);
  ok = ok && t < 60.0;
  return {ok, fmt("100 clouds of 500 points, %.1f s", t)};
}

bool is_chain_sequence(const std::string& label) {
  return label.rfind("ladder", 0) == 0 || label.rfind("packing", 0) == 0;
}

Outcome carleson_chain(const std::vector<cli::BundledSequence>& bundle) {
  bool ok = true;
  std::size_t tested = 0;
  double tail = 0.0;
  std::uint64_t seed = 120;
  for (const auto& b : bundle) {
    if (!is_chain_sequence(b.label)) continue;
    CarlesonConfig cfg;
    cfg.mc = mc_with(20000, seed++);
    const auto v = cross_check_equivalence(dirac_carleson_measure(b.points), cfg);
    const auto s = escape_sum(b.points, EscapeWeight::none(), EscapeExponent::n_plus_1);
    ok = ok && v.overall() == Verdict::pass && s.cauchy();
    tail = std::max(tail, s.tail_increment);
    ++tested;
  }
  const auto mass = escape_sum(radial_ladder(1, 50), EscapeWeight::none(), EscapeExponent::n_plus_1);
  const double err = std::abs(mass.total - 1.0 / (std::exp(2.0) - 1.0));
  ok = ok && err <= 1e-6 && tested >= 4;
  return {ok, fmt("%.0f sequences, max tail increment %.2g, |mass - 1/(e^2-1)| = %.2g",
                  static_cast<double>(tested), tail, err)};
}

Outcome escape_and_shells(const std::vector<cli::BundledSequence>& bundle) {
  const auto s = escape_sum(radial_ladder(1, 50), EscapeWeight::power(2.0), EscapeExponent::n);
  bool ok = std::abs(s.total - 0.40875) <= 1e-4;
  double margin = INFINITY;
  for (const auto& b : bundle) {
    const auto sc = shell_counts(b.points, Point(b.points.dim()), b.horizon, b.first_shell);
    ok = ok && sc.within_bound();
    margin = std::min(margin, sc.bound - sc.slope);
  }
  return {ok, fmt("sum = %.6f, min (n + 0.2 - slope) = %.3f over all bundled sequences", s.total,
                  margin)};
}

Outcome covering() {
  bool ok = true;
  std::string detail;
  for (std::size_t n : {1, 2}) {
    const auto c = greedy_cover(n, 0.1, 0.5, 11 + n);
    ok = ok && c.probes >= 10000 && c.covered() && c.stable() && c.disjoint();
    std::ostringstream os;
    os << "n=" << n << ": " << c.centers.size() << " centers, multiplicity " << c.multiplicity << "/"
       << c.multiplicity_refined << "; ";
    detail += os.str();
  }
  return {ok, detail};
}

Outcome eisenman_kobayashi() {
  const auto e = ek_ball_measure(Point(1), 0.5, mc_with(100000, 140));
  bool ok = e.within(1.0 / 3.0);
  std::uint64_t seed = 141;
  for (double x : {0.3, 0.6, 0.9}) {
    const auto m = ek_ball_measure(Point::basis(2, 0, x), 0.5, mc_with(100000, seed++));
    ok = ok && m.within(ek_ball_measure_exact(2, 0.5));
  }
  ok = ok && check_ek_invariance(Point::basis(1, 0, 0.5), 0.5, 3, mc_with(100000, 150)).passed();
  return {ok, fmt("kappa(B(0, 0.5)) = %.5f +- %.1g", e.value, e.std_error)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path base = fs::temp_directory_path() / "carleson_acceptance_verify";
  fs::remove_all(base);
  double slowest = 0.0;
  bool ok = true;
  for (const char* leaf : {"a", "b"}) {
    const std::string dir = (base / leaf).string();
    const char* argv[] = {"carleson-lab", "verify", "quick", "--seed", "1", "--out", dir.c_str()};
    std::ostringstream out, err;
    const auto t0 = Clock::now();
    const int code = cli::run_app(7, argv, out, err);
    slowest = std::max(slowest, seconds_since(t0));
    ok = ok && code == cli::kPass;
  }
  const std::string a = slurp(base / "a" / "verify.csv");
  const std::string b = slurp(base / "b" / "verify.csv");
  ok = ok && !a.empty() && a == b && slowest <= 60.0;
  return {ok, std::string("identical CSV: ") + (a == b ? "yes" : "no") +
                  fmt(", slowest run %.1f s", slowest)};
}

}  // namespace

int main() {
  apply_thread_cap_from_env();
  const auto bundle = cli::bundled_sequences(true, derive_seed(1, 300));
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 ball volume identity", ball_volume_grid},
      {"2 Berezin normalization", berezin_normalization},
      {"3 reproducing property", reproducing},
      {"4 Carleson test equivalence", equivalence},
      {"5 kernel estimates", kernel_estimates},
      {"6 separated decomposition", decomposition},
      {"7 Carleson chain for sequences", [&] { return carleson_chain(bundle); }},
      {"8 escape sum and shell growth", [&] { return escape_and_shells(bundle); }},
      {"9 covering", covering},
      {"10 Eisenman-Kobayashi measure", eisenman_kobayashi},
      {"11 determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.ok ? 0 : 1;
    std::printf("%s  %s  (%s)\n", o.ok ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
