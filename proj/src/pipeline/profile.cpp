#include "lct/pipeline/profile.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lct/litmus/error.hpp"
#include "lct/models/registry.hpp"

namespace lct::pipeline {

namespace {

using nlohmann::json;

CompilerProfile::Kind parse_kind(const std::string& s) {
  if (s == "builtin") return CompilerProfile::Kind::Builtin;
  if (s == "prebuilt-asm") return CompilerProfile::Kind::PrebuiltAsm;
  if (s == "live") return CompilerProfile::Kind::Live;
  throw Error(ErrorKind::BadConfig, "unknown profile kind: '" + s + "'");
}

std::vector<std::string> string_list(const json& j, const std::string& field) {
  if (!j.is_array()) throw Error(ErrorKind::BadConfig, field + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw Error(ErrorKind::BadConfig, field + " must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

bool has_placeholder(const std::vector<std::string>& argv, const std::string& ph) {
  return std::any_of(argv.begin(), argv.end(),
                     [&](const std::string& a) { return a.find(ph) != std::string::npos; });
}

std::string require_string(const json& j, const std::string& field) {
  if (!j.contains(field) || !j.at(field).is_string())
    throw Error(ErrorKind::BadConfig, "profile is missing string field '" + field + "'");
  return j.at(field).get<std::string>();
}

CompilerProfile parse_one(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::BadConfig, "profile entries must be objects");
  CompilerProfile p;
  p.name = require_string(j, "name");
  p.kind = parse_kind(require_string(j, "kind"));
  p.source_model = require_string(j, "source_model");
  p.target_model = require_string(j, "target_model");
  models::lookup_model(p.source_model);
  models::lookup_model(p.target_model);
  if (j.contains("isa")) p.isa = require_string(j, "isa");
  if (j.contains("stage_timeout_seconds")) {
    if (!j.at("stage_timeout_seconds").is_number_integer())
      throw Error(ErrorKind::BadConfig, "stage_timeout_seconds must be an integer");
    int secs = j.at("stage_timeout_seconds").get<int>();
    if (secs < 1) throw Error(ErrorKind::BadConfig, "stage_timeout_seconds must be >= 1");
    p.stage_timeout = std::chrono::seconds(secs);
  }
  switch (p.kind) {
    case CompilerProfile::Kind::Live:
      if (!j.contains("compile_command") || !j.contains("disassemble_command"))
        throw Error(ErrorKind::BadConfig,
                    "live profile '" + p.name + "' needs compile_command and disassemble_command");
      p.compile_command = string_list(j.at("compile_command"), "compile_command");
      p.disassemble_command = string_list(j.at("disassemble_command"), "disassemble_command");
      if (!has_placeholder(p.compile_command, "{input}") ||
          !has_placeholder(p.compile_command, "{output}"))
        throw Error(ErrorKind::BadConfig,
                    "compile_command must use the {input} and {output} placeholders");
      if (!has_placeholder(p.disassemble_command, "{input}"))
        throw Error(ErrorKind::BadConfig, "disassemble_command must use the {input} placeholder");
      break;
    case CompilerProfile::Kind::PrebuiltAsm:
      p.asm_dir = require_string(j, "asm_dir");
      break;
    case CompilerProfile::Kind::Builtin:
      break;
  }
  return p;
}

}  // namespace

std::vector<CompilerProfile> parse_profiles(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::BadConfig, std::string("profile JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("profiles") || !doc.at("profiles").is_array())
    throw Error(ErrorKind::BadConfig, "profile document must be {\"profiles\": [...]}");
  std::vector<CompilerProfile> out;
  for (const auto& j : doc.at("profiles")) out.push_back(parse_one(j));
  for (size_t i = 0; i < out.size(); ++i)
    for (size_t k = i + 1; k < out.size(); ++k)
      if (out[i].name == out[k].name)
        throw Error(ErrorKind::BadConfig, "duplicate profile name: '" + out[i].name + "'");
  return out;
}

std::vector<CompilerProfile> load_profiles_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw Error(ErrorKind::BadConfig, "cannot open profile file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_profiles(ss.str());
}

const CompilerProfile& find_profile(const std::vector<CompilerProfile>& profiles,
                                    const std::string& name) {
  for (const auto& p : profiles)
    if (p.name == name) return p;
  throw Error(ErrorKind::BadConfig, "no such profile: '" + name + "'");
}

}  // namespace lct::pipeline
