#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lct/diffcheck/compare.hpp"
#include "lct/engine/simulate.hpp"
#include "lct/pipeline/profile.hpp"
#include "lct/transforms/peephole.hpp"
#include "lct/transforms/persist.hpp"

namespace lct::pipeline {

enum class PersistMode { Off, Auto, Plan };

struct PipelineOptions {
  std::string out_dir;   // artifacts under <out_dir>/<profile>/<test>/; empty = no artifacts
  std::string data_dir;  // base for PrebuiltAsm asm_dir resolution
  PersistMode persist = PersistMode::Off;
  transforms::PersistencePlan plan;  // PersistMode::Plan
  transforms::PeepholeOptions opt_rules;
  engine::SimOptions sim;
  diffcheck::RacePolicy race_policy = diffcheck::RacePolicy::IgnoreRacy;
  std::vector<std::pair<std::string, std::string>> mapping_hints;
};

// Stage trace of one test under one profile. A failed stage records its tag
// and message; fields of later stages stay empty.
struct PipelineRun {
  std::string test_name;
  std::string profile_name;

  std::optional<std::string> unit_c;
  std::optional<std::string> disasm_text;
  std::optional<litmus::LitmusTest> source_test;  // post-persist
  std::optional<litmus::LitmusTest> target_test;  // post-peephole
  std::optional<engine::SimulationResult> source_sim;
  std::optional<engine::SimulationResult> target_sim;
  std::optional<diffcheck::DiffReport> report;
  transforms::OptStats opt_stats;
  std::vector<std::string> warnings;

  std::vector<std::pair<std::string, double>> stage_seconds;
  std::optional<std::string> failure_stage;
  std::optional<std::string> failure_message;

  bool failed() const { return failure_stage.has_value(); }
  // "Positive" | "Negative" | "Equal" | "UBFiltered" | "Failure"
  std::string classification() const;
};

// prepare → compile/disassemble (or builtin/prebuilt substitute) → s2l →
// simulate both sides → compare, persisting artifacts stage by stage.
// Stage errors are captured in the run, not thrown.
PipelineRun run_pipeline(const litmus::LitmusTest& test, const CompilerProfile& profile,
                         const PipelineOptions& opts);

// One deterministic JSON line per run: names, classification, outcome sets,
// novel/missing outcomes, warnings, peephole stats. No timings.
std::string diff_record_json(const PipelineRun& run);

}  // namespace lct::pipeline
