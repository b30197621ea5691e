#include "carleson/point.hpp"

#include <cmath>
#include <stdexcept>

#include "carleson/errors.hpp"

namespace carleson {

namespace {

struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

void require_same_dim(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) throw ParameterError("point dimension mismatch");
}

}  // namespace

Point Point::basis(std::size_t dim, std::size_t k, double scale) {
  Point p(dim);
  p[k] = cplx{scale, 0.0};
  return p;
}

Point Point::from_real(std::span<const double> interleaved) {
  if (interleaved.size() % 2 != 0) {
    throw ParameterError("interleaved coordinates need an even count");
  }
  Point p(interleaved.size() / 2);
  for (std::size_t j = 0; j < p.dim(); ++j) {
    p[j] = cplx{interleaved[2 * j], interleaved[2 * j + 1]};
  }
  return p;
}

double Point::norm2() const noexcept {
  double s = 0.0;
  for (const auto& c : coords_) s += std::norm(c);
  return s;
}

double Point::norm() const noexcept { return std::sqrt(norm2()); }

bool Point::is_finite() const noexcept {
  for (const auto& c : coords_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

std::vector<double> Point::to_real() const {
  std::vector<double> out;
  out.reserve(2 * coords_.size());
  for (const auto& c : coords_) {
    out.push_back(c.real());
    out.push_back(c.imag());
  }
  return out;
}

Point& Point::operator+=(const Point& o) {
  require_same_dim(*this, o);
  for (std::size_t j = 0; j < coords_.size(); ++j) coords_[j] += o.coords_[j];
  return *this;
}

Point& Point::operator-=(const Point& o) {
  require_same_dim(*this, o);
  for (std::size_t j = 0; j < coords_.size(); ++j) coords_[j] -= o.coords_[j];
  return *this;
}

Point& Point::operator*=(cplx s) {
  for (auto& c : coords_) c *= s;
  return *this;
}

cplx inner(const Point& z, const Point& w) {
  require_same_dim(z, w);
  NeumaierSum re;
  NeumaierSum im;
  for (std::size_t j = 0; j < z.dim(); ++j) {
    const cplx a = z[j];
    const cplx b = w[j];
    // a * conj(b)
    re.add(a.real() * b.real());
    re.add(a.imag() * b.imag());
    im.add(a.imag() * b.real());
    im.add(-a.real() * b.imag());
  }
  return {re.value(), im.value()};
}

double wedge_norm2(const Point& z, const Point& w) {
  require_same_dim(z, w);
  double s = 0.0;
  for (std::size_t i = 0; i < z.dim(); ++i) {
    for (std::size_t j = i + 1; j < z.dim(); ++j) {
      s += std::norm(z[i] * w[j] - z[j] * w[i]);
    }
  }
  return s;
}

double distance(const Point& z, const Point& w) {
  require_same_dim(z, w);
  double s = 0.0;
  for (std::size_t j = 0; j < z.dim(); ++j) s += std::norm(z[j] - w[j]);
  return std::sqrt(s);
}

}  // namespace carleson
