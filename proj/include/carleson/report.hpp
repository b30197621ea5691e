#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace carleson {

enum class Verdict { pass, fail, inconclusive };

std::string to_string(Verdict v);

/// Combines verdicts: any fail wins, then any inconclusive, else pass.
Verdict worst_of(Verdict a, Verdict b);

/// Outcome of a numerical inequality check. Serializes to
/// {check, statistic, bound, pass, verdict, n_samples, std_error, seed, ...}.
struct CheckReport {
  std::string check;
  double statistic = 0.0;
  double bound = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::size_t n_samples = 0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
  nlohmann::json details = nlohmann::json::object();

  bool passed() const { return verdict == Verdict::pass; }
};

nlohmann::json to_json(const CheckReport& r);

}  // namespace carleson
