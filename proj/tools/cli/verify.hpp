#pragma once

// Release gate: one or more check rows per lemma of the three sections
// (1.1-1.8, 2.1-2.4, 3.1-3.6). Everything is seeded, so two runs with the same
// options produce identical tables; wall times are kept out of the CSV.

#include <string>
#include <vector>

#include <json.hpp>

#include "carleson/bergman.hpp"
#include "carleson/io.hpp"
#include "carleson/report.hpp"

namespace carleson::cli {

struct VerifyOptions {
  std::string suite = "quick";  ///< quick | full
  std::uint64_t seed = 1;
  /// Kernel used by the kernel rows; tests substitute faulty kernels here.
  KernelFn kernel = carleson::kernel;
};

struct VerifyRow {
  std::string lemma;
  CheckReport report;
  double seconds = 0.0;
};

struct VerifyResult {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<VerifyRow> rows;

  Verdict overall() const;
  CsvTable csv() const;
  nlohmann::json to_json(bool with_timings = true) const;
  /// Aligned plain-text table.
  std::string text() const;
};

/// Throws ParameterError for an unknown suite.
VerifyResult run_verify(const VerifyOptions& opts);

}  // namespace carleson::cli
