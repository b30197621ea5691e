#pragma once

// Data-parallel building blocks. Every kernel comes in two flavours selected
// by Exec: an OpenMP version and a plain serial reference. Both evaluate the
// same per-index work and reduce in the same fixed order, so their results
// are bit-identical; the serial path exists for tests and benchmarks.

#include <omp.h>

#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <vector>

namespace carleson {

enum class Exec { parallel, serial };

/// Streaming mean/variance (Welford), mergeable in a fixed order (Chan et al.).
/// Non-finite inputs are counted in `excluded` and otherwise ignored.
struct Accumulator {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t excluded = 0;

  void add(double x) {
    if (!std::isfinite(x)) {
      ++excluded;
      return;
    }
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const Accumulator& o) {
    excluded += o.excluded;
    if (o.count == 0) return;
    if (count == 0) {
      const std::size_t ex = excluded;
      *this = o;
      excluded = ex;
      return;
    }
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(o.count);
    const double delta = o.mean - mean;
    const double n = na + nb;
    mean += delta * nb / n;
    m2 += o.m2 + delta * delta * na * nb / n;
    count += o.count;
  }

  double variance() const {
    return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
  }
};

/// Caps OpenMP workers from CARLESON_LAB_THREADS when set.
void apply_thread_cap_from_env();
int worker_count();

/// out[i] = task(i) for i in [0, n). Exceptions thrown by tasks are captured
/// and the one with the lowest index is rethrown after the loop.
template <class T, class Task>
std::vector<T> map_indexed(std::size_t n, Task&& task, Exec exec) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  const long count = static_cast<long>(n);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < count; ++i) {
      try {
        out[static_cast<std::size_t>(i)] = task(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (long i = 0; i < count; ++i) {
      try {
        out[static_cast<std::size_t>(i)] = task(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

/// Fixed-order merge of per-task accumulators.
inline Accumulator reduce_in_order(const std::vector<Accumulator>& parts) {
  Accumulator total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

/// min over 0 <= i < j < n of dist(i, j); +inf when n < 2.
template <class Dist>
double min_pairwise(std::size_t n, Dist&& dist, Exec exec) {
  double best = std::numeric_limits<double>::infinity();
  const long count = static_cast<long>(n);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16) reduction(min : best)
    for (long i = 0; i < count; ++i) {
      for (long j = i + 1; j < count; ++j) {
        const double d = dist(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        if (d < best) best = d;
      }
    }
  } else {
    for (long i = 0; i < count; ++i) {
      for (long j = i + 1; j < count; ++j) {
        const double d = dist(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        if (d < best) best = d;
      }
    }
  }
  return best;
}

/// For every query q: number of targets t with match(q, t).
template <class Match>
std::vector<std::size_t> count_matches(std::size_t queries, std::size_t targets,
                                       Match&& match, Exec exec) {
  return map_indexed<std::size_t>(
      queries,
      [&](std::size_t q) {
        std::size_t c = 0;
        for (std::size_t t = 0; t < targets; ++t) {
          if (match(q, t)) ++c;
        }
        return c;
      },
      exec);
}

}  // namespace carleson
