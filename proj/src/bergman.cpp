#include "carleson/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "carleson/ball.hpp"
#include "carleson/errors.hpp"
#include "carleson/kernels.hpp"

namespace carleson {

namespace {

cplx int_pow(cplx v, std::size_t k) {
  cplx p{1.0, 0.0};
  for (std::size_t i = 0; i < k; ++i) p *= v;
  return p;
}

double factorial(int k) { return std::exp(std::lgamma(static_cast<double>(k) + 1.0)); }

constexpr int kDirectLevels = 20;
constexpr double kDirectRadialShare = 0.15;
constexpr double kDirectShellShare = 0.35;
constexpr long kSeriesCap = 50000000;
constexpr double kSphereSnap = 1e-6;

}  // namespace

cplx kernel(const Point& z, const Point& w) {
  if (z.dim() != w.dim()) throw ParameterError("point dimension mismatch");
  require_in_ball(z, "z");
  require_in_ball(w, "w");
  const std::size_t n = z.dim();
  const cplx v = cplx{1.0, 0.0} - inner(z, w);
  const double lv = std::log(std::abs(v));
  if (-static_cast<double>(n + 1) * lv > 0.9 * std::log(std::numeric_limits<double>::max())) {
    throw DomainError("kernel evaluation too close to the boundary diagonal");
  }
  // 1/p as conj(p)/|p|^2 keeps K(z,w) = conj K(w,z) bit for bit.
  const cplx p = int_pow(v, n + 1);
  return std::conj(p) / std::norm(p);
}

cplx normalized_kernel(const Point& z0, const Point& z) {
  const double n1 = static_cast<double>(z0.dim() + 1);
  const double diag = std::pow(1.0 - z0.norm2(), -n1);
  return kernel(z, z0) / std::sqrt(diag);
}

double normalized_kernel_sq(const Point& z0, const Point& z) {
  const double n1 = static_cast<double>(z0.dim() + 1);
  const double den = std::norm(cplx{1.0, 0.0} - inner(z, z0));
  return std::pow((1.0 - z0.norm2()) / den, n1);
}

double normalized_kernel_sq_atom(const Point& z, const Atom& a) {
  const double n1 = static_cast<double>(z.dim() + 1);
  const double den = std::norm(cplx{1.0, 0.0} - inner(a.point, z));
  return std::pow((1.0 - z.norm2()) * a.one_minus_norm2() / den, n1);
}

EstimateWithError berezin_transform(const Measure& mu, const Point& z, const MCConfig& mc) {
  if (z.dim() != mu.dim()) throw ParameterError("probe dimension mismatch");
  require_in_ball(z, "probe");
  double atomic = 0.0;
  for (const Atom& a : mu.atoms()) atomic += a.weight * normalized_kernel_sq_atom(z, a);
  EstimateWithError est;
  if (mu.has_density()) {
    const double gz = 1.0 - z.norm2();
    // 1 - |phi_z(u)|^2 = (1-|z|^2)(1-|u|^2) / |1 - <u,z>|^2.
    auto pulled = [&](const Point& u) {
      const double gap = gz * (1.0 - u.norm2()) / std::norm(cplx{1.0, 0.0} - inner(u, z));
      return mu.density_from_gap(gap);
    };
    const double beta = std::min(mu.boundary_exponent(), 0.0);
    est = integrate_unit_ball_weighted(pulled, mu.dim(), beta, mc);
  } else {
    est.n_effective = 0;
  }
  est.value += atomic;
  return est;
}

EstimateWithError kernel_mass_direct(const Measure& mu, const Point& z, const MCConfig& mc) {
  if (z.dim() != mu.dim()) throw ParameterError("probe dimension mismatch");
  require_in_ball(z, "probe");
  mc.validate();
  double atomic = 0.0;
  for (const Atom& a : mu.atoms()) atomic += a.weight * normalized_kernel_sq_atom(z, a);
  EstimateWithError est;
  if (!mu.has_density()) {
    est.value = atomic;
    return est;
  }

  const std::size_t n = mu.dim();
  const double dn = static_cast<double>(n);
  const double beta = std::min(mu.boundary_exponent(), 0.0);
  const double gz = 1.0 - z.norm2();
  std::vector<Ellipsoid> shells;
  std::vector<double> inv_vol;
  for (int i = 1; i <= kDirectLevels; ++i) {
    const KobayashiBall b = kobayashi_ball(z, 1.0 - std::ldexp(1.0, -i));
    shells.push_back(b.ellipsoid());
    inv_vol.push_back(1.0 / b.volume());
  }
  // Components: 0 radial law, 1 image of the radial law under phi_z,
  // 2.. uniform on nested Kobayashi ellipsoids around z.
  const std::size_t C = shells.size() + 2;
  std::vector<double> share(C, kDirectShellShare / static_cast<double>(C - 2));
  share[0] = kDirectRadialShare;
  share[1] = 1.0 - kDirectRadialShare - kDirectShellShare;

  auto radial_density = [&](double gap) {
    const double t = 1.0 - gap;
    return (beta + 1.0) * std::pow(gap, beta) / (dn * std::pow(t, dn - 1.0));
  };
  auto proposal_density = [&](const Point& zeta, double kz) {
    const double gap = 1.0 - zeta.norm2();
    const double pulled_gap = gz * gap / std::norm(cplx{1.0, 0.0} - inner(zeta, z));
    double q = share[0] * radial_density(gap) + share[1] * radial_density(pulled_gap) * kz;
    for (std::size_t c = 2; c < C; ++c) {
      if (shells[c - 2].contains(zeta)) q += share[c] * inv_vol[c - 2];
    }
    return q;
  };

  const std::size_t sub = mc.substreams;
  auto task = [&](std::size_t id) {
    const std::size_t c = id / sub;
    const std::size_t j = id % sub;
    const std::size_t total = static_cast<std::size_t>(std::llround(share[c] * mc.n_samples));
    const std::size_t per = total / sub + (j < total % sub ? 1 : 0);
    CounterRng rng(mc.seed, id);
    Accumulator acc;
    for (std::size_t i = 0; i < per; ++i) {
      Point zeta = draw_unit_sphere(n, rng);
      if (c <= 1) {
        const double gap = std::pow(rng.uniform(), 1.0 / (beta + 1.0));
        zeta *= cplx{std::sqrt(1.0 - gap), 0.0};
        if (c == 1) zeta = ball_automorphism(z, zeta);
      } else {
        const double rad = std::pow(rng.uniform(), 1.0 / (2.0 * dn));
        zeta = shells[c - 2].map(zeta * cplx{rad, 0.0});
      }
      if (!(zeta.norm2() < 1.0)) {
        acc.add(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      const double kz = normalized_kernel_sq(z, zeta);
      acc.add(kz * mu.density(zeta) / proposal_density(zeta, kz));
    }
    return acc;
  };
  const auto parts = map_indexed<Accumulator>(C * sub, task, mc.exec);

  double var = 0.0;
  for (std::size_t c = 0; c < C; ++c) {
    Accumulator comp;
    for (std::size_t j = 0; j < sub; ++j) comp.merge(parts[c * sub + j]);
    if (comp.count == 0) throw AnalysisError("empty mixture component");
    est.value += share[c] * comp.mean;
    var += share[c] * share[c] * comp.variance() / static_cast<double>(comp.count);
    est.n_effective += comp.count;
    est.n_excluded += comp.excluded;
  }
  if (static_cast<double>(est.n_excluded) > 1e-4 * static_cast<double>(mc.n_samples)) {
    throw AnalysisError("kernel_mass_direct: too many non-finite samples");
  }
  est.std_error = std::sqrt(var);
  est.value += atomic;
  return est;
}

double hypergeometric_2f1(double a, double b, double c, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw ParameterError("2F1 is evaluated on [0, 1] only");
  if (x == 1.0) {
    if (!(c - a - b > 0.0)) throw DomainError("2F1 diverges at x = 1");
    return std::exp(std::lgamma(c) + std::lgamma(c - a - b) - std::lgamma(c - a) -
                    std::lgamma(c - b));
  }
  double term = 1.0, sum = 1.0, comp = 0.0;
  for (long k = 0; k < kSeriesCap; ++k) {
    const double kk = static_cast<double>(k);
    term *= (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0)) * x;
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && kk > a + b) return sum + comp;
  }
  throw AnalysisError("2F1 series did not converge; the point is too close to x = 1");
}

double berezin_power_density(std::size_t n, double s, double x) {
  if (!(s > -1.0)) throw ParameterError("density exponent must exceed -1");
  const double dn = static_cast<double>(n);
  const double mass = std::exp(std::lgamma(dn + 1.0) + std::lgamma(s + 1.0) - std::lgamma(dn + 1.0 + s));
  if (s == 0.0) return 1.0;
  // Within 1e-6 of the sphere the series is replaced by its Gauss limit.
  const double xe = 1.0 - x < kSphereSnap ? 1.0 : x;
  return mass * std::pow(1.0 - x, s) * hypergeometric_2f1(s, s, dn + 1.0 + s, xe);
}

double kernel_mass_exact(const Measure& mu, const Point& z) {
  if (z.dim() != mu.dim()) throw ParameterError("probe dimension mismatch");
  require_in_ball(z, "probe");
  double v = 0.0;
  for (const Atom& a : mu.atoms()) v += a.weight * normalized_kernel_sq_atom(z, a);
  const double x = z.norm2();
  for (const PowerDensity& d : mu.densities()) {
    v += d.coeff * berezin_power_density(mu.dim(), d.s, x);
  }
  return v;
}

// ------------------------------------------------------------- polynomials

std::vector<std::vector<int>> multi_indices(std::size_t n, int degree) {
  std::vector<std::vector<int>> out;
  for (int total = 0; total <= degree; ++total) {
    std::vector<int> alpha(n, 0);
    // Enumerate compositions of `total` into n parts.
    auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
      if (pos + 1 == n) {
        alpha[pos] = left;
        out.push_back(alpha);
        return;
      }
      for (int k = left; k >= 0; --k) {
        alpha[pos] = k;
        self(self, pos + 1, left - k);
      }
    };
    rec(rec, 0, total);
  }
  return out;
}

double monomial_norm2(const std::vector<int>& alpha) {
  int total = 0;
  double num = 1.0;
  for (int a : alpha) {
    total += a;
    num *= factorial(a);
  }
  const int n = static_cast<int>(alpha.size());
  return num * factorial(n) / factorial(n + total);
}

cplx Polynomial::operator()(const Point& z) const {
  cplx s{0.0, 0.0};
  for (const auto& t : terms) {
    cplx m = t.coeff;
    for (std::size_t j = 0; j < n; ++j) m *= int_pow(z[j], static_cast<std::size_t>(t.alpha[j]));
    s += m;
  }
  return s;
}

double Polynomial::norm2() const {
  double s = 0.0;
  for (const auto& t : terms) s += std::norm(t.coeff) * monomial_norm2(t.alpha);
  return s;
}

double Polynomial::weighted_norm2(double s) const {
  if (!(s > -1.0)) throw ParameterError("weight exponent must exceed -1");
  const double dn = static_cast<double>(n);
  double total = 0.0;
  for (const auto& t : terms) {
    double lg = std::lgamma(dn + 1.0) + std::lgamma(s + 1.0);
    int k = 0;
    for (int a : t.alpha) {
      lg += std::lgamma(a + 1.0);
      k += a;
    }
    total += std::norm(t.coeff) * std::exp(lg - std::lgamma(dn + k + s + 1.0));
  }
  return total;
}

std::size_t Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms) {
    int k = 0;
    for (int a : t.alpha) k += a;
    d = std::max(d, k);
  }
  return static_cast<std::size_t>(d);
}

Polynomial Polynomial::monomial(std::size_t n, std::vector<int> alpha) {
  if (alpha.size() != n) throw ParameterError("multi-index length must equal n");
  Polynomial p;
  p.n = n;
  p.terms.push_back({std::move(alpha), cplx{1.0, 0.0}});
  return p;
}

Polynomial Polynomial::random(std::size_t n, int degree, std::uint64_t seed) {
  if (degree < 0) throw ParameterError("degree must be >= 0");
  Polynomial p;
  p.n = n;
  CounterRng rng(seed, 0);
  for (auto& alpha : multi_indices(n, degree)) {
    const double re = rng.normal();
    const double im = rng.normal();
    p.terms.push_back({alpha, cplx{re, im}});
  }
  return p;
}

// ---------------------------------------------------------------- checkers

CheckReport check_reproducing(const Point& z, const std::vector<int>& alpha, const MCConfig& mc,
                              const KernelFn& K) {
  const std::size_t n = z.dim();
  const Polynomial mono = Polynomial::monomial(n, alpha);
  const cplx target = mono(z);
  const Ellipsoid unit = Ellipsoid::unit_ball(n);
  const auto re = integrate_density([&](const Point& w) { return (K(z, w) * mono(w)).real(); },
                                    unit, mc);
  const auto im = integrate_density([&](const Point& w) { return (K(z, w) * mono(w)).imag(); },
                                    unit, mc);
  // Absolute floor for integrands that are constant (zero variance).
  constexpr double kFloor = 1e-12;
  const double zre = std::abs(re.value - target.real()) / std::max(re.std_error, kFloor);
  const double zim = std::abs(im.value - target.imag()) / std::max(im.std_error, kFloor);
  const bool ok_re = std::abs(re.value - target.real()) <= 3.0 * re.std_error + kFloor;
  const bool ok_im = std::abs(im.value - target.imag()) <= 3.0 * im.std_error + kFloor;
  CheckReport rep;
  rep.check = "reproducing";
  rep.statistic = std::max(zre, zim);
  rep.bound = 3.0;
  rep.verdict = ok_re && ok_im ? Verdict::pass : Verdict::fail;
  rep.n_samples = mc.n_samples;
  rep.std_error = std::hypot(re.std_error, im.std_error);
  rep.seed = mc.seed;
  rep.details = {{"alpha", alpha},
                 {"z", z.to_real()},
                 {"estimate", {re.value, im.value}},
                 {"target", {target.real(), target.imag()}}};
  return rep;
}

CheckReport check_diagonal_identity(const Point& z, const MCConfig& mc) {
  const std::size_t n = z.dim();
  const double target = kernel(z, z).real();
  MCConfig cfg = mc;
  cfg.pole_order = static_cast<double>(n + 1);
  const auto est = integrate_density([&](const Point& w) { return std::norm(kernel(z, w)); },
                                     Ellipsoid::unit_ball(n), cfg);
  CheckReport rep;
  rep.check = "diagonal_identity";
  rep.statistic = est.value;
  rep.bound = target;
  rep.verdict = est.within(target) ? Verdict::pass : Verdict::fail;
  rep.n_samples = mc.n_samples;
  rep.std_error = est.std_error;
  rep.seed = mc.seed;
  return rep;
}

CheckReport check_kernel_upper(std::size_t n, const std::vector<double>& radii) {
  double sup = 0.0;
  double worst_dev = 0.0;
  const double n1 = static_cast<double>(n + 1);
  for (double t : radii) {
    const Point z = Point::basis(n, 0, t);
    const double prod = kernel(z, z).real() * std::pow(1.0 - t, n1);
    sup = std::max(sup, prod);
    worst_dev = std::max(worst_dev, std::abs(prod - std::pow(1.0 + t, -n1)));
  }
  CheckReport rep;
  rep.check = "kernel_upper";
  rep.statistic = sup;
  rep.bound = 1.0;
  rep.verdict = sup <= 1.0 ? Verdict::pass : Verdict::fail;
  rep.n_samples = radii.size();
  rep.details = {{"max_deviation_from_closed_form", worst_dev}};
  return rep;
}

CheckReport check_kernel_lower(const std::vector<Point>& centers, double r, std::size_t samples,
                               std::uint64_t seed) {
  if (centers.empty()) throw ParameterError("need at least one center");
  const std::size_t n = centers.front().dim();
  const double n1 = static_cast<double>(n + 1);
  const double bound = std::pow((1.0 - r) * (1.0 - r) * (1.0 + r) / 16.0, n1);
  const auto mins = map_indexed<double>(
      centers.size(),
      [&](std::size_t c) {
        const Point& z0 = centers[c];
        const double d0 = 1.0 - z0.norm();
        double m = std::numeric_limits<double>::infinity();
        for (const Point& z : sample_ball_uniform(kobayashi_ball(z0, r), samples,
                                                  derive_seed(seed, c))) {
          m = std::min(m, normalized_kernel_sq(z0, z) * std::pow(d0, n1));
        }
        return m;
      },
      Exec::parallel);
  std::size_t violations = 0;
  double overall = std::numeric_limits<double>::infinity();
  for (double m : mins) {
    overall = std::min(overall, m);
    if (m < bound) ++violations;
  }
  CheckReport rep;
  rep.check = "kernel_lower";
  rep.statistic = overall;
  rep.bound = bound;
  rep.verdict = violations == 0 ? Verdict::pass : Verdict::fail;
  rep.n_samples = samples * centers.size();
  rep.seed = seed;
  rep.details = {{"r", r}, {"violating_cells", violations}, {"cells", centers.size()}};
  return rep;
}

CheckReport check_submean(const Polynomial& f, const Point& z0, double r, const MCConfig& mc) {
  const std::size_t n = z0.dim();
  const double dn = static_cast<double>(n);
  const KobayashiBall ball = kobayashi_ball(z0, r);
  auto chi = [&](const Point& z) { return std::norm(f(z)); };
  const auto I = integrate_density(chi, ball.ellipsoid(), mc);
  const double d = 1.0 - z0.norm();
  const double C = std::pow(4.0, dn + 1.0) / (std::pow(r, 2.0 * dn) * std::pow(d, dn + 1.0));
  const double chi0 = chi(z0);
  const double slack = C * I.value - chi0;
  const double slack_err = C * I.std_error;

  CheckReport rep;
  rep.check = "submean";
  rep.statistic = slack;
  rep.bound = 0.0;
  rep.n_samples = mc.n_samples;
  rep.std_error = slack_err;
  rep.seed = mc.seed;
  if (slack > 0.0) {
    rep.verdict = slack_err > 0.1 * slack ? Verdict::inconclusive : Verdict::pass;
  } else {
    rep.verdict = -slack > 3.0 * slack_err ? Verdict::fail : Verdict::inconclusive;
  }

  const double vol = ball.volume();
  const double fitted_mean_value = I.value > 0.0 ? chi0 * vol / I.value : 0.0;
  const double R = 0.5 * (1.0 + r);
  const auto J = integrate_density(chi, kobayashi_ball(z0, R).ellipsoid(), mc.with_label(1));
  double worst = 0.0;
  for (const Point& z : sample_ball_uniform(ball, 1000, derive_seed(mc.seed, 2))) {
    worst = std::max(worst, chi(z));
  }
  rep.details = {{"r", r},
                 {"constant", C},
                 {"chi_z0", chi0},
                 {"integral", I.value},
                 {"fitted_C3", fitted_mean_value},
                 {"fitted_K", J.value > 0.0 ? worst * vol / J.value : 0.0}};
  return rep;
}

}  // namespace carleson
