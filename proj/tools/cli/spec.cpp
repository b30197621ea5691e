#include "spec.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "carleson/errors.hpp"
#include "carleson/io.hpp"
#include "ops.hpp"

namespace carleson::cli {

namespace {

class Locator {
 public:
  Locator(std::string source, const std::string& text) : source_(std::move(source)), text_(text) {}

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    std::string where = source_;
    if (!text_.empty() && !key.empty()) {
      const auto pos = text_.find("\"" + key + "\"");
      if (pos != std::string::npos) where += ":" + std::to_string(line_of_offset(text_, pos));
    }
    throw ValidationError(where + ": " + msg);
  }

  void check_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                  const std::string& context) const {
    if (!obj.is_object()) fail(context, "'" + context + "' must be an object");
    for (const auto& [key, value] : obj.items()) {
      if (!allowed.count(key)) fail(key, "unknown key '" + key + "' in " + context);
    }
  }

 private:
  std::string source_;
  const std::string& text_;
};

const std::set<std::string> kTopKeys{"name",     "op",     "n",  "domain", "measure",
                                     "sequence", "params", "mc", "output"};
const std::set<std::string> kMcKeys{"seed", "samples", "substreams", "strata"};
const std::set<std::string> kOutputKeys{"dir", "format"};
const std::set<std::string> kSequenceKeys{"generator", "M",      "u",      "delta",
                                          "eps",       "candidates", "seed", "levels",
                                          "jitter",    "path",   "points", "metric"};
const std::set<std::string> kGenerators{"ladder", "packing", "lattice", "file", "points"};

template <class T>
T typed(const Locator& loc, const nlohmann::json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    loc.fail(key, "key '" + key + "' has the wrong type");
  }
}

}  // namespace

nlohmann::json ExperimentSpec::to_json() const {
  nlohmann::json j{{"name", name},
                   {"op", op},
                   {"n", n},
                   {"params", params},
                   {"mc",
                    {{"seed", mc.seed},
                     {"samples", mc.n_samples},
                     {"substreams", mc.substreams},
                     {"strata", mc.strata}}},
                   {"output", {{"dir", out_dir}, {"format", format}}}};
  if (!domain.is_null()) j["domain"] = domain;
  if (!measure.is_null()) j["measure"] = measure;
  if (!sequence.is_null()) j["sequence"] = sequence;
  return j;
}

ExperimentSpec spec_from_json(const nlohmann::json& j, const std::string& source,
                              const std::string& text) {
  const Locator loc(source, text);
  if (!j.is_object()) loc.fail("", "spec must be a JSON object");
  loc.check_keys(j, kTopKeys, "spec");

  ExperimentSpec s;
  if (!j.contains("op")) loc.fail("", "missing required key 'op'");
  s.op = typed<std::string>(loc, j, "op");
  const OpInfo* info = find_op(s.op);
  if (info == nullptr || !info->runnable) loc.fail("op", "unknown op '" + s.op + "'");

  if (j.contains("name")) s.name = typed<std::string>(loc, j, "name");
  if (j.contains("n")) {
    const long n = typed<long>(loc, j, "n");
    if (n < 1 || n > 10) loc.fail("n", "n must lie in [1, 10]");
    s.n = static_cast<std::size_t>(n);
  }
  if (j.contains("domain")) s.domain = j.at("domain");
  if (j.contains("measure")) s.measure = j.at("measure");
  if (j.contains("sequence")) {
    s.sequence = j.at("sequence");
    loc.check_keys(s.sequence, kSequenceKeys, "sequence");
    if (!s.sequence.contains("generator")) loc.fail("sequence", "sequence needs a 'generator'");
    const auto gen = typed<std::string>(loc, s.sequence, "generator");
    if (!kGenerators.count(gen)) loc.fail("generator", "unknown generator '" + gen + "'");
  }
  if (j.contains("params")) {
    s.params = j.at("params");
    loc.check_keys(s.params, std::set<std::string>(info->params.begin(), info->params.end()),
                   "params of " + s.op);
  }
  if (j.contains("mc")) {
    const auto& mc = j.at("mc");
    loc.check_keys(mc, kMcKeys, "mc");
    if (mc.contains("seed")) s.mc.seed = typed<std::uint64_t>(loc, mc, "seed");
    if (mc.contains("samples")) s.mc.n_samples = typed<std::size_t>(loc, mc, "samples");
    if (mc.contains("substreams")) s.mc.substreams = typed<std::size_t>(loc, mc, "substreams");
    if (mc.contains("strata")) s.mc.strata = typed<int>(loc, mc, "strata");
    try {
      s.mc.validate();
    } catch (const ParameterError& e) {
      loc.fail("mc", e.what());
    }
  }
  if (j.contains("output")) {
    const auto& out = j.at("output");
    loc.check_keys(out, kOutputKeys, "output");
    if (out.contains("dir")) s.out_dir = typed<std::string>(loc, out, "dir");
    if (out.contains("format")) s.format = typed<std::string>(loc, out, "format");
    if (s.format != "csv" && s.format != "json") loc.fail("format", "format must be csv or json");
  }
  if (info->needs_measure && s.measure.is_null()) loc.fail("", s.op + " needs a 'measure'");
  if (info->needs_sequence && s.sequence.is_null()) loc.fail("", s.op + " needs a 'sequence'");
  return s;
}

ExperimentSpec parse_spec(const std::string& text, const std::string& source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    throw ValidationError(source + ":" + std::to_string(line_of_offset(text, offset)) +
                          ": malformed JSON");
  }
  if (j.is_object() && j.contains("spec") && j.contains("manifest_version")) {
    return spec_from_json(j.at("spec"), source, text);
  }
  return spec_from_json(j, source, text);
}

ExperimentSpec load_spec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str(), path);
}

}  // namespace carleson::cli
