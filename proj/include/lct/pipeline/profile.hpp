#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace lct::pipeline {

// One compiler tool-chain configuration. "live" drives external tools,
// "prebuilt-asm" reads a pinned compiled counterpart from asm_dir, "builtin"
// uses the internal reference lowering; the latter two never spawn processes.
struct CompilerProfile {
  enum class Kind { Builtin, PrebuiltAsm, Live };

  std::string name;
  Kind kind = Kind::Builtin;
  std::string isa = "AArch64";
  std::string source_model;
  std::string target_model;
  // Live: argv templates with {input}/{output} placeholders and ${VAR}
  // environment references, expanded at spawn time.
  std::vector<std::string> compile_command;
  std::vector<std::string> disassemble_command;
  std::string asm_dir;  // PrebuiltAsm: directory of <test>.litmus files
  std::chrono::seconds stage_timeout{60};
};

// Parse a profile document: {"profiles": [{...}]}. Validates that referenced
// models exist and that live commands carry the required placeholders.
// Throws BadConfig on malformed input, UnknownModel on bad model names.
std::vector<CompilerProfile> parse_profiles(const std::string& json_text);
std::vector<CompilerProfile> load_profiles_file(const std::string& path);

// Throws BadConfig when the name is absent.
const CompilerProfile& find_profile(const std::vector<CompilerProfile>& profiles,
                                    const std::string& name);

}  // namespace lct::pipeline
