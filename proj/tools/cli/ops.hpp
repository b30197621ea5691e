#pragma once

// Registry of library operations reachable from the command line. Every
// entry names the subcommand that exposes it and the params it accepts.

#include <string>
#include <vector>

#include <json.hpp>

#include "carleson/io.hpp"
#include "carleson/report.hpp"

namespace carleson::cli {

struct ExperimentSpec;

struct OpInfo {
  std::string name;
  std::string module;
  std::string command;  ///< subcommand path, e.g. "seq shells"
  std::vector<std::string> params;
  bool needs_measure = false;
  bool needs_sequence = false;
  bool runnable = true;  ///< false for run/verify, which the app handles
  std::string summary;
};

const std::vector<OpInfo>& op_registry();
const OpInfo* find_op(const std::string& name);

struct OpResult {
  Verdict verdict = Verdict::pass;
  CsvTable table;
  nlohmann::json summary = nlohmann::json::object();
};

/// Runs spec.op. Library exceptions propagate unchanged.
OpResult execute(const ExperimentSpec& spec);

}  // namespace carleson::cli
