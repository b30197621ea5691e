#include "carleson/measure.hpp"

#include <cmath>
#include <set>
#include <string>

#include "carleson/errors.hpp"

namespace carleson {

Measure::Measure(std::size_t n) : n_(n) {
  if (n == 0) throw ParameterError("dimension must be positive");
}

Measure Measure::lebesgue(std::size_t n) { return power(n, 0.0); }

Measure Measure::power(std::size_t n, double s, double coeff) {
  Measure m(n);
  m.add_density({coeff, s});
  return m;
}

Measure Measure::dirac(const Point& p, double weight) {
  Measure m(p.dim());
  m.add_atom(p, weight);
  return m;
}

Measure& Measure::add_atom(const Point& p, double weight, std::optional<double> d) {
  if (p.dim() != n_) throw ValidationError("atom dimension mismatch");
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw ValidationError("atom weights must be positive and finite");
  }
  if (!p.is_finite()) throw ValidationError("atom coordinates must be finite");
  double dist = d.value_or(1.0 - p.norm());
  if (!(dist > 0.0) || dist > 1.0) throw ValidationError("atoms must lie in the open unit ball");
  if (d && std::abs((1.0 - p.norm()) - dist) > 1e-12) {
    throw ValidationError("atom boundary distance inconsistent with its coordinates");
  }
  atoms_.push_back({p, weight, dist});
  return *this;
}

Measure& Measure::add_density(PowerDensity d) {
  if (!(d.coeff > 0.0) || !std::isfinite(d.coeff)) {
    throw ValidationError("density coefficient must be positive");
  }
  if (!(d.s > -1.0) || !std::isfinite(d.s)) {
    throw ValidationError("density exponent must exceed -1 for finite mass");
  }
  densities_.push_back(d);
  return *this;
}

Measure Measure::scaled(double a) const {
  if (!(a > 0.0)) throw ValidationError("scale factor must be positive");
  Measure m = *this;
  for (auto& atom : m.atoms_) atom.weight *= a;
  for (auto& d : m.densities_) d.coeff *= a;
  return m;
}

Measure Measure::plus(const Measure& other) const {
  if (other.n_ != n_) throw ValidationError("measure dimension mismatch");
  Measure m = *this;
  m.atoms_.insert(m.atoms_.end(), other.atoms_.begin(), other.atoms_.end());
  m.densities_.insert(m.densities_.end(), other.densities_.begin(), other.densities_.end());
  return m;
}

double Measure::density(const Point& z) const { return density_from_gap(1.0 - z.norm2()); }

double Measure::density_from_gap(double x) const {
  double v = 0.0;
  for (const auto& d : densities_) v += d.s == 0.0 ? d.coeff : d.coeff * std::pow(x, d.s);
  return v;
}

double Measure::boundary_exponent() const {
  double s = 0.0;
  bool any = false;
  for (const auto& d : densities_) {
    s = any ? std::min(s, d.s) : d.s;
    any = true;
  }
  return s;
}

double Measure::atomic_mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.weight;
  return m;
}

double Measure::density_mass() const {
  const double n = static_cast<double>(n_);
  double m = 0.0;
  for (const auto& d : densities_) {
    m += d.coeff * std::exp(std::lgamma(n + 1.0) + std::lgamma(d.s + 1.0) -
                            std::lgamma(n + d.s + 1.0));
  }
  return m;
}

nlohmann::json Measure::to_json() const {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : atoms_) atoms.push_back({a.point.to_real(), a.weight});
  nlohmann::json dens = nlohmann::json::array();
  for (const auto& d : densities_) dens.push_back({{"type", "power"}, {"s", d.s}, {"coeff", d.coeff}});
  return {{"n", n_}, {"atoms", atoms}, {"densities", dens}};
}

Measure measure_from_json(const nlohmann::json& j, std::size_t n) {
  if (!j.is_object()) throw ValidationError("measure must be an object");
  static const std::set<std::string> allowed{"atoms", "density"};
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ValidationError("unknown measure key '" + key + "'");
  }
  Measure m(n);
  if (j.contains("atoms")) {
    for (const auto& item : j.at("atoms")) {
      if (!item.is_array() || item.size() != 2) {
        throw ValidationError("atoms entries must be [coords, weight]");
      }
      m.add_atom(Point::from_real(item.at(0).get<std::vector<double>>()), item.at(1).get<double>());
    }
  }
  if (j.contains("density")) {
    const auto& d = j.at("density");
    if (d.is_string()) {
      if (d.get<std::string>() != "none") throw ValidationError("density must be 'none' or an object");
    } else {
      for (const auto& [key, value] : d.items()) {
        if (key != "type" && key != "s" && key != "coeff") {
          throw ValidationError("unknown density key '" + key + "'");
        }
      }
      if (d.value("type", std::string("power")) != "power") {
        throw ValidationError("only power densities are supported");
      }
      m.add_density({d.value("coeff", 1.0), d.value("s", 0.0)});
    }
  }
  return m;
}

}  // namespace carleson
