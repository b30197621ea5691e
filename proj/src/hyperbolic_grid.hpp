#pragma once

// Neighbour search for pseudohyperbolic balls of a fixed radius delta in B^n.
// Points are bucketed by level L = floor(-log2(1 - |z|^2)) and, inside a
// level, by a Euclidean grid. rho(z, w) < delta bounds the ratio of
// 1 - |z|^2 and 1 - |w|^2 by (1+delta)/(1-delta), which limits the levels a
// query visits; the cell size of a level is the Euclidean reach of a
// delta-ball from the shallowest level that can query it, so every query
// scans at most three cells per real coordinate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "carleson/ball.hpp"
#include "carleson/point.hpp"

namespace carleson::detail {

class HyperbolicGrid {
 public:
  HyperbolicGrid(std::size_t n, double delta) : n_(n), delta_(delta) {
    ratio_ = (1.0 + delta) / (1.0 - delta);
    const int spread = static_cast<int>(std::ceil(std::log2(ratio_))) + 1;
    for (int L = 0; L <= kMaxLevel; ++L) {
      const double g = std::min(1.0, std::ldexp(1.0, spread - L));
      spacing_.push_back(std::max(reach(g), 1e-300));
    }
  }

  void insert(const Point& z, std::uint32_t id) {
    const int L = level(z);
    cells_[key(L, z, spacing_[static_cast<std::size_t>(L)])].push_back(id);
  }

  /// Calls f(id) for every stored point that may lie within delta of z;
  /// stops early when f returns true and reports whether it did.
  template <class F>
  bool visit(const Point& z, F&& f) const {
    const double gz = 1.0 - z.norm2();
    const double e = reach(gz);
    const std::vector<double> x = z.to_real();
    std::vector<long> lo(x.size()), hi(x.size()), idx(x.size());
    const int first = level_of_gap(std::min(1.0, gz * ratio_));
    const int last = level_of_gap(gz / ratio_);
    for (int L = first; L <= last; ++L) {
      const double h = spacing_[static_cast<std::size_t>(L)];
      for (std::size_t k = 0; k < x.size(); ++k) {
        lo[k] = static_cast<long>(std::floor((x[k] - e) / h));
        hi[k] = static_cast<long>(std::floor((x[k] + e) / h));
      }
      idx = lo;
      while (true) {
        const auto it = cells_.find(hash(L, idx));
        if (it != cells_.end()) {
          for (std::uint32_t id : it->second) {
            if (f(id)) return true;
          }
        }
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] > hi[k]) {
          idx[k] = lo[k];
          ++k;
        }
        if (k == idx.size()) break;
      }
    }
    return false;
  }

 private:
  static constexpr int kMaxLevel = 60;

  // Euclidean distance from z to the far end of B(z, delta) when
  // 1 - |z|^2 = g: |center - z| plus the longest semi-axis.
  double reach(double g) const {
    const double s = std::clamp(1.0 - g, 0.0, 1.0);
    const double d2 = delta_ * delta_;
    const double den = 1.0 - d2 * s;
    const double axis = n_ == 1 ? delta_ * g / den : delta_ * std::sqrt(g / den);
    return std::sqrt(s) * d2 * g / den + axis;
  }

  static int level_of_gap(double g) {
    if (!(g > 0.0)) return kMaxLevel;
    return std::clamp(static_cast<int>(std::floor(-std::log2(g))), 0, kMaxLevel);
  }

  static int level(const Point& z) { return level_of_gap(1.0 - z.norm2()); }

  std::uint64_t key(int L, const Point& z, double h) const {
    const std::vector<double> x = z.to_real();
    std::vector<long> idx(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) idx[k] = static_cast<long>(std::floor(x[k] / h));
    return hash(L, idx);
  }

  static std::uint64_t hash(int L, const std::vector<long>& idx) {
    std::uint64_t h = 0x9E3779B97F4A7C15ull ^ static_cast<std::uint64_t>(L);
    for (long v : idx) {
      h ^= static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
      h *= 0xBF58476D1CE4E5B9ull;
    }
    return h;
  }

  std::size_t n_;
  double delta_;
  double ratio_ = 1.0;
  std::vector<double> spacing_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

}  // namespace carleson::detail
