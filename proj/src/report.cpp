#include "carleson/report.hpp"

#include <cmath>

namespace carleson {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Verdict worst_of(Verdict a, Verdict b) {
  if (a == Verdict::fail || b == Verdict::fail) return Verdict::fail;
  if (a == Verdict::inconclusive || b == Verdict::inconclusive) return Verdict::inconclusive;
  return Verdict::pass;
}

nlohmann::json to_json(const CheckReport& r) {
  auto num = [](double x) -> nlohmann::json {
    if (std::isfinite(x)) return x;
    return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
  };
  nlohmann::json j = {
      {"check", r.check},
      {"statistic", num(r.statistic)},
      {"bound", num(r.bound)},
      {"pass", r.passed()},
      {"verdict", to_string(r.verdict)},
      {"n_samples", r.n_samples},
      {"std_error", num(r.std_error)},
      {"seed", r.seed},
  };
  if (!r.details.empty()) j["details"] = r.details;
  return j;
}

}  // namespace carleson
