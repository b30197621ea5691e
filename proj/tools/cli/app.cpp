#include "app.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "carleson/errors.hpp"
#include "carleson/io.hpp"
#include "carleson/kernels.hpp"
#include "ops.hpp"
#include "spec.hpp"
#include "verify.hpp"

#ifndef CARLESON_LAB_VERSION
#define CARLESON_LAB_VERSION "0.0.0"
#endif

namespace carleson::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Flags {
  std::string spec_path;
  std::string op;
  std::optional<long> n;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::string out;
  std::string format;
  std::vector<std::string> params;
  std::string z0;
  std::optional<double> r;
  std::string measure;
  std::string sequence;
  std::string domain;
  std::string name;
};

json parse_inline(const std::string& flag, const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    throw UsageError("--" + flag + " expects JSON, got '" + text + "'");
  }
}

/// k=v with v parsed as JSON; bare words are taken as strings.
std::pair<std::string, json> parse_param(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=value, got '" + kv + "'");
  const std::string key = kv.substr(0, eq);
  const std::string val = kv.substr(eq + 1);
  try {
    return {key, json::parse(val)};
  } catch (const json::parse_error&) {
    return {key, json(val)};
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_document(const std::string& text, const std::string& source) {
  try {
    json j = json::parse(text);
    if (j.is_object() && j.contains("spec") && j.contains("manifest_version")) return j.at("spec");
    return j;
  } catch (const json::parse_error& e) {
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    throw ValidationError(source + ":" + std::to_string(line_of_offset(text, offset)) +
                          ": malformed JSON");
  }
}

void add_spec_flags(CLI::App* sub, Flags& f, bool with_op) {
  sub->add_option("--spec", f.spec_path, "experiment spec (JSON) or manifest");
  if (with_op) sub->add_option("--op", f.op, "operation to run");
  sub->add_option("--n", f.n, "complex dimension");
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--samples", f.samples, "Monte-Carlo samples");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--param,-p", f.params, "operation parameter key=value (JSON value)");
  sub->add_option("--z0", f.z0, "center as a JSON list of reals");
  sub->add_option("--r", f.r, "Kobayashi radius");
  sub->add_option("--measure", f.measure, "measure config (JSON)");
  sub->add_option("--sequence", f.sequence, "sequence config (JSON)");
  sub->add_option("--domain", f.domain, "domain config (JSON)");
  sub->add_option("--name", f.name, "experiment name");
}

/// Spec document from --spec (if any) with the flags layered on top.
ExperimentSpec build_spec(const Flags& f, const std::string& command, const std::string& default_op) {
  std::string text;
  std::string source = "<flags>";
  json doc = json::object();
  if (!f.spec_path.empty()) {
    text = read_text(f.spec_path);
    source = f.spec_path;
    doc = parse_document(text, source);
    if (!doc.is_object()) throw ValidationError(source + ": spec must be a JSON object");
  }
  if (!f.op.empty()) {
    doc["op"] = f.op;
  } else if (!doc.contains("op") && !default_op.empty()) {
    doc["op"] = default_op;
  }
  if (!f.name.empty()) doc["name"] = f.name;
  if (f.n) doc["n"] = *f.n;
  if (!f.measure.empty()) doc["measure"] = parse_inline("measure", f.measure);
  if (!f.sequence.empty()) doc["sequence"] = parse_inline("sequence", f.sequence);
  if (!f.domain.empty()) doc["domain"] = parse_inline("domain", f.domain);
  const bool any_param = !f.params.empty() || !f.z0.empty() || f.r;
  if (any_param && !doc.contains("params")) doc["params"] = json::object();
  for (const auto& kv : f.params) {
    auto [k, v] = parse_param(kv);
    doc["params"][k] = v;
  }
  if (!f.z0.empty()) doc["params"]["z0"] = parse_inline("z0", f.z0);
  if (f.r) doc["params"]["r"] = *f.r;
  if (f.seed) doc["mc"]["seed"] = *f.seed;
  if (f.samples) doc["mc"]["samples"] = *f.samples;
  if (!f.out.empty()) doc["output"]["dir"] = f.out;
  if (!f.format.empty()) doc["output"]["format"] = f.format;

  ExperimentSpec spec = spec_from_json(doc, source, text);
  if (!command.empty()) {
    const OpInfo* info = find_op(spec.op);
    if (info->command != command) {
      throw UsageError("op '" + spec.op + "' belongs to '" + info->command + "', not '" + command +
                       "'");
    }
  }
  return spec;
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return kPass;
    case Verdict::fail: return kFail;
    case Verdict::inconclusive: return kInconclusive;
  }
  return kFail;
}

json versions() {
  return {{"carleson_lab", CARLESON_LAB_VERSION},
          {"compiler", __VERSION__},
          {"cxx_standard", static_cast<long>(__cplusplus)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"openmp", static_cast<long>(_OPENMP)}};
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError(path.string() + ": cannot write");
  out << content;
}

json table_json(const CsvTable& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < t.header.size() && i < row.size(); ++i) obj[t.header[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  return rows;
}

int execute_spec(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  const OpResult res = execute(spec);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool is_verify = spec.op == "verify";

  json summary{{"name", spec.name},
               {"op", spec.op},
               {"verdict", to_string(res.verdict)},
               {"result", is_verify ? res.summary.value("rows", json::array()) : res.summary}};
  if (spec.out_dir.empty()) {
    if (spec.format == "json") {
      out << json{{"rows", table_json(res.table)}, {"summary", summary}}.dump(2) << "\n";
    } else {
      out << res.table.str();
    }
  } else {
    const fs::path dir(spec.out_dir);
    fs::create_directories(dir);
    if (spec.format == "json") {
      write_file(dir / "results.json", table_json(res.table).dump(2) + "\n");
    } else {
      res.table.write(dir / "results.csv");
    }
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    const json manifest{{"manifest_version", 1},
                        {"spec", spec.to_json()},
                        {"seed", spec.mc.seed},
                        {"versions", versions()},
                        {"timings", {{"seconds", seconds}}},
                        {"verdict", to_string(res.verdict)}};
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    out << "wrote " << dir.string() << "\n";
  }
  err << spec.op << ": " << to_string(res.verdict) << "\n";
  return exit_code(res.verdict);
}

int run_verify_command(const std::string& suite, std::optional<std::uint64_t> seed,
                       const std::string& out_dir, std::ostream& out) {
  VerifyOptions opts;
  opts.suite = suite;
  if (seed) opts.seed = *seed;
  const auto t0 = std::chrono::steady_clock::now();
  const VerifyResult v = run_verify(opts);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out << v.text();
  if (!out_dir.empty()) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    v.csv().write(dir / "verify.csv");
    write_file(dir / "verify.json", v.to_json().dump(2) + "\n");
    ExperimentSpec spec;
    spec.name = "verify-" + suite;
    spec.op = "verify";
    spec.params = {{"suite", suite}};
    spec.mc.seed = opts.seed;
    spec.out_dir = out_dir;
    const json manifest{{"manifest_version", 1},
                        {"spec", spec.to_json()},
                        {"seed", opts.seed},
                        {"versions", versions()},
                        {"timings", {{"seconds", seconds}}},
                        {"verdict", to_string(v.overall())}};
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  }
  return exit_code(v.overall());
}

void list_ops(std::ostream& out) {
  CsvTable t;
  t.header = {"op", "module", "command", "params", "summary"};
  for (const auto& info : op_registry()) {
    std::string params;
    for (const auto& p : info.params) params += (params.empty() ? "" : " ") + p;
    t.add({info.name, info.module, info.command, params, info.summary});
  }
  out << t.str();
}

}  // namespace

int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Carleson measures and uniformly discrete sequences in the unit ball",
               "carleson-lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CARLESON_LAB_VERSION);

  struct Command {
    CLI::App* sub;
    std::string command;
    std::string default_op;
  };
  Flags flags;
  std::vector<Command> commands;
  auto spec_command = [&](CLI::App* parent, const std::string& name, const std::string& command,
                          const std::string& default_op, const std::string& help) {
    CLI::App* sub = parent->add_subcommand(name, help);
    add_spec_flags(sub, flags, true);
    commands.push_back({sub, command, default_op});
  };
  spec_command(&app, "ball", "ball", "kobayashi_ball", "ball geometry, domains and integration");
  spec_command(&app, "berezin", "berezin", "berezin_transform", "Bergman kernel and Berezin transform");
  spec_command(&app, "carleson-test", "carleson-test", "cross_check_equivalence",
               "Carleson tests of a measure");
  CLI::App* seq = app.add_subcommand("seq", "uniformly discrete sequences");
  seq->require_subcommand(1);
  spec_command(seq, "analyze", "seq analyze", "separation_constant",
               "separation, counts and induced measures");
  spec_command(seq, "decompose", "seq decompose", "greedy_decompose",
               "decomposition into separated classes");
  spec_command(seq, "escape", "seq escape", "escape_sum", "escape-rate sums");
  spec_command(seq, "shells", "seq shells", "shell_counts", "Kobayashi shell counts");
  spec_command(&app, "cover", "cover", "greedy_cover", "covers by Kobayashi balls");
  spec_command(&app, "ek", "ek", "ek_ball_measure", "Eisenman-Kobayashi measure");

  std::string run_path;
  CLI::App* run = app.add_subcommand("run", "execute a spec or manifest");
  run->add_option("spec", run_path, "spec or manifest file")->required();
  run->add_option("--out", flags.out, "output directory (overrides the spec)");
  run->add_option("--seed", flags.seed, "master seed (overrides the spec)");
  run->add_option("--format", flags.format, "csv or json (overrides the spec)")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string suite = "quick";
  CLI::App* verify = app.add_subcommand("verify", "per-lemma check table");
  verify->add_option("suite", suite, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--seed", flags.seed, "master seed");
  verify->add_option("--out", flags.out, "directory for verify.csv and verify.json");

  app.add_subcommand("ops", "list registered operations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::CallForVersion&) {
    out << CARLESON_LAB_VERSION << "\n";
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  apply_thread_cap_from_env();
  try {
    if (app.got_subcommand("ops")) {
      list_ops(out);
      return kPass;
    }
    if (verify->parsed()) return run_verify_command(suite, flags.seed, flags.out, out);
    if (run->parsed()) {
      flags.spec_path = run_path;
      return execute_spec(build_spec(flags, "", ""), out, err);
    }
    for (const auto& c : commands) {
      if (c.sub->parsed()) return execute_spec(build_spec(flags, c.command, c.default_op), out, err);
    }
    err << "usage error: no subcommand\n";
    return kUsage;
  } catch (const AnalysisError& e) {
    err << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const ParameterError& e) {
    err << "invalid parameter: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFail;
  }
}

}  // namespace carleson::cli
