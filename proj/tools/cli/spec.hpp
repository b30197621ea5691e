#pragma once

// Experiment specification: the single input format behind every subcommand.
// Subcommands translate their flags into an ExperimentSpec, and the manifest
// written next to the results stores the resolved spec, so any run can be
// replayed with `carleson-lab run manifest.json`.

#include <string>

#include <json.hpp>

#include "carleson/integrate.hpp"

namespace carleson::cli {

struct ExperimentSpec {
  std::string name = "experiment";
  std::string op;
  std::size_t n = 1;
  nlohmann::json domain;    ///< null: the unit ball of dimension n
  nlohmann::json measure;   ///< null when the op needs none
  nlohmann::json sequence;  ///< null when the op needs none
  nlohmann::json params = nlohmann::json::object();
  MCConfig mc;
  std::string out_dir;      ///< empty: print to stdout
  std::string format = "csv";

  nlohmann::json to_json() const;
};

/// Parses and validates a spec document. Unknown keys, wrong types and
/// unknown ops throw ValidationError prefixed with "source:line:".
ExperimentSpec parse_spec(const std::string& text, const std::string& source);

/// Same checks for an already parsed document; `text`, when given, is used to
/// locate offending keys.
ExperimentSpec spec_from_json(const nlohmann::json& j, const std::string& source,
                              const std::string& text = "");

/// Reads a spec file, or a manifest written by a previous run (its "spec"
/// member is used).
ExperimentSpec load_spec_file(const std::string& path);

}  // namespace carleson::cli
