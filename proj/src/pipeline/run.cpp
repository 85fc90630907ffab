#include "lct/pipeline/run.hpp"

#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "lct/engine/logfmt.hpp"
#include "lct/litmus/error.hpp"
#include "lct/litmus/parse.hpp"
#include "lct/models/registry.hpp"
#include "lct/pipeline/asm_to_litmus.hpp"
#include "lct/pipeline/disasm.hpp"
#include "lct/pipeline/lower.hpp"
#include "lct/pipeline/prepare_source.hpp"
#include "lct/pipeline/subprocess.hpp"

namespace lct::pipeline {

namespace fs = std::filesystem;
using litmus::LitmusTest;

namespace {

// Runs one stage with wall-clock accounting; a thrown Error (or any
// exception) is recorded on the run and stops the pipeline.
template <typename F>
bool stage(PipelineRun& run, const std::string& tag, F&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  try {
    fn();
  } catch (const Error& e) {
    run.failure_stage = tag;
    run.failure_message = std::string(error_kind_name(e.kind())) + ": " + e.what();
    ok = false;
  } catch (const std::exception& e) {
    run.failure_stage = tag;
    run.failure_message = e.what();
    ok = false;
  }
  std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  run.stage_seconds.emplace_back(tag, dt.count());
  return ok;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::BadConfig, "cannot write artifact " + p.string());
  out << content;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::CompileFailed, "cannot read " + p.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return text;
}

// Scratch directory for live-compile intermediates when no artifact directory
// was requested. Unique per call so parallel batches never collide.
struct ScratchDir {
  fs::path path;
  bool owned = false;

  explicit ScratchDir(const fs::path& wanted) {
    if (!wanted.empty()) {
      fs::create_directories(wanted);
      path = wanted;
      return;
    }
    std::string tmpl = (fs::temp_directory_path() / "lct-XXXXXX").string();
    if (!mkdtemp(tmpl.data()))
      throw Error(ErrorKind::BadConfig, "cannot create scratch directory");
    path = tmpl;
    owned = true;
  }
  ~ScratchDir() {
    if (owned) {
      std::error_code ec;
      fs::remove_all(path, ec);
    }
  }
};

std::vector<std::string> expand_command(const std::vector<std::string>& tmpl,
                                        const std::string& input, const std::string& output) {
  std::vector<std::string> argv;
  argv.reserve(tmpl.size());
  for (const std::string& piece : tmpl) {
    std::string s = expand_env(piece);
    auto subst = [&](const std::string& key, const std::string& val) {
      size_t pos;
      while ((pos = s.find(key)) != std::string::npos) s.replace(pos, key.size(), val);
    };
    subst("{input}", input);
    subst("{output}", output);
    argv.push_back(std::move(s));
  }
  return argv;
}

std::string excerpt(const std::string& s, size_t limit = 400) {
  if (s.size() <= limit) return s;
  return s.substr(0, limit) + "...";
}

}  // namespace

std::string PipelineRun::classification() const {
  if (failed()) return "Failure";
  if (report) {
    if (report->ub_filtered) return "UBFiltered";
    return diffcheck::classification_name(report->classification);
  }
  return "Failure";
}

PipelineRun run_pipeline(const LitmusTest& test, const CompilerProfile& profile,
                         const PipelineOptions& opts) {
  PipelineRun run;
  run.test_name = test.name;
  run.profile_name = profile.name;

  fs::path art_dir;
  bool artifacts = !opts.out_dir.empty();

  // prepare: persist locals when asked, render the (possibly transformed)
  // source, open the artifact directory.
  if (!stage(run, "prepare", [&] {
        if (test.dialect != litmus::Dialect::Source)
          throw Error(ErrorKind::DialectMismatch,
                      "the pipeline starts from a source-dialect test");
        LitmusTest prepared = test;
        if (opts.persist != PersistMode::Off) {
          transforms::PersistencePlan plan = opts.persist == PersistMode::Auto
                                                 ? transforms::PersistencePlan::auto_for(test)
                                                 : opts.plan;
          if (!plan.empty()) {
            prepared = transforms::persist_locals(test, plan);
            // The suffix keys prebuilt-asm lookup and keeps artifact trees
            // of persisted and plain runs apart.
            prepared.name += "_persist";
            run.test_name = prepared.name;
          }
        }
        run.source_test = std::move(prepared);
        if (artifacts) {
          art_dir = fs::path(opts.out_dir) / profile.name / run.test_name;
          fs::create_directories(art_dir);
          write_file(art_dir / "src.litmus", litmus::render_litmus(*run.source_test));
        }
      }))
    return run;

  const models::ModelSpec& source_model = models::lookup_model(profile.source_model);
  const models::ModelSpec& target_model = models::lookup_model(profile.target_model);

  // race-check: a racy source test has undefined behaviour; under IgnoreRacy
  // the comparison is vacuous and the pipeline stops with a filtered verdict.
  bool filtered = false;
  if (!stage(run, "race-check", [&] {
        if (opts.race_policy != diffcheck::RacePolicy::IgnoreRacy) return;
        auto races = engine::detect_races(*run.source_test, source_model, opts.sim);
        if (!races.empty()) {
          diffcheck::DiffReport rep;
          rep.ub_filtered = true;
          rep.warnings.push_back("source test is racy under " + profile.source_model + " (" +
                                 std::to_string(races.size()) + " unordered conflicting pairs)");
          run.report = rep;
          filtered = true;
        }
      }))
    return run;
  if (filtered) {
    if (artifacts) write_file(art_dir / "diff.json", diff_record_json(run) + "\n");
    return run;
  }

  // compile: produce the target-side assembly test by the profile's route.
  if (!stage(run, "compile", [&] {
        switch (profile.kind) {
          case CompilerProfile::Kind::Builtin: {
            run.unit_c = prepare_source(*run.source_test);
            if (artifacts) write_file(art_dir / "unit.c", *run.unit_c);
            LitmusTest lowered = lower_builtin(*run.source_test);
            auto [opt, stats] = transforms::optimize_asm(lowered, opts.opt_rules);
            run.target_test = std::move(opt);
            run.opt_stats = std::move(stats);
            break;
          }
          case CompilerProfile::Kind::PrebuiltAsm: {
            fs::path dir = fs::path(profile.asm_dir).is_absolute()
                               ? fs::path(profile.asm_dir)
                               : fs::path(opts.data_dir) / profile.asm_dir;
            fs::path file = dir / (run.test_name + ".litmus");
            if (!fs::exists(file))
              throw Error(ErrorKind::CompileFailed,
                          "no prebuilt assembly for this test: " + file.string());
            LitmusTest parsed = litmus::parse_litmus(read_file(file));
            if (parsed.dialect != litmus::Dialect::Asm)
              throw Error(ErrorKind::DialectMismatch,
                          file.string() + " is not an assembly-dialect test");
            auto [opt, stats] = transforms::optimize_asm(parsed, opts.opt_rules);
            run.target_test = std::move(opt);
            run.opt_stats = std::move(stats);
            break;
          }
          case CompilerProfile::Kind::Live: {
            run.unit_c = prepare_source(*run.source_test);
            ScratchDir scratch(artifacts ? art_dir : fs::path());
            fs::path c_file = scratch.path / "unit.c";
            fs::path obj_file = scratch.path / "unit.o";
            write_file(c_file, *run.unit_c);

            auto cc = expand_command(profile.compile_command, c_file.string(),
                                     obj_file.string());
            ProcResult ccr = run_process(cc, profile.stage_timeout);
            if (ccr.timed_out)
              throw Error(ErrorKind::Timeout, "compiler timed out after " +
                                                  std::to_string(profile.stage_timeout.count()) +
                                                  " s");
            if (ccr.exit_code != 0)
              throw Error(ErrorKind::CompileFailed,
                          "compiler exited with " + std::to_string(ccr.exit_code) + ": " +
                              excerpt(ccr.err));

            auto dis = expand_command(profile.disassemble_command, obj_file.string(), "");
            ProcResult disr = run_process(dis, profile.stage_timeout);
            if (disr.timed_out)
              throw Error(ErrorKind::Timeout, "disassembler timed out");
            if (disr.exit_code != 0)
              throw Error(ErrorKind::DisassembleFailed,
                          "disassembler exited with " + std::to_string(disr.exit_code) + ": " +
                              excerpt(disr.err));
            run.disasm_text = disr.out;
            if (artifacts) write_file(art_dir / "disasm.txt", *run.disasm_text);

            ParsedDisasm parsed = parse_objdump(*run.disasm_text);
            AsmReconstruction rec = asm_to_litmus(parsed, *run.source_test, opts.opt_rules);
            run.target_test = std::move(rec.test);
            run.opt_stats = std::move(rec.opt_stats);
            for (auto& w : rec.warnings) run.warnings.push_back(std::move(w));
            break;
          }
        }
        if (artifacts) write_file(art_dir / "tgt.litmus", litmus::render_litmus(*run.target_test));
      }))
    return run;

  if (!stage(run, "simulate-source", [&] {
        run.source_sim = engine::simulate(*run.source_test, source_model, opts.sim);
        if (artifacts)
          write_file(art_dir / "src.log", engine::render_log(*run.source_test, *run.source_sim));
      }))
    return run;

  if (!stage(run, "simulate-target", [&] {
        run.target_sim = engine::simulate(*run.target_test, target_model, opts.sim);
        if (artifacts)
          write_file(art_dir / "tgt.log", engine::render_log(*run.target_test, *run.target_sim));
      }))
    return run;

  if (!stage(run, "compare", [&] {
        diffcheck::StateMapping mapping =
            diffcheck::infer_state_mapping(*run.source_test, *run.target_test, opts.mapping_hints);
        run.report = diffcheck::compare_outcomes(run.source_sim->outcomes,
                                                 run.target_sim->outcomes, mapping);
        if (artifacts) write_file(art_dir / "diff.json", diff_record_json(run) + "\n");
      }))
    return run;

  return run;
}

std::string diff_record_json(const PipelineRun& run) {
  nlohmann::ordered_json j;
  j["test"] = run.test_name;
  j["profile"] = run.profile_name;
  j["classification"] = run.classification();
  if (run.failed()) {
    j["failure"] = {{"stage", *run.failure_stage}, {"message", *run.failure_message}};
    return j.dump();
  }

  auto rendered = [&](const std::set<engine::Outcome>& outs) {
    std::vector<std::string> lines;
    for (const auto& o : outs) lines.push_back(engine::render_outcome(*run.source_test, o));
    return lines;
  };

  if (run.report) {
    j["ub_filtered"] = run.report->ub_filtered;
    if (!run.report->ub_filtered && run.source_test) {
      j["source_outcomes"] = rendered(run.report->source);
      j["target_outcomes"] = rendered(run.report->mapped_target);
      j["novel"] = rendered(run.report->novel);
      j["missing"] = rendered(run.report->missing);
    }
  }

  std::vector<std::string> warnings = run.warnings;
  if (run.report)
    warnings.insert(warnings.end(), run.report->warnings.begin(), run.report->warnings.end());
  j["warnings"] = warnings;

  if (run.target_test) {
    nlohmann::ordered_json opt;
    opt["events_before"] = run.opt_stats.events_before;
    opt["events_after"] = run.opt_stats.events_after;
    opt["instructions_before"] = run.opt_stats.instructions_before;
    opt["instructions_after"] = run.opt_stats.instructions_after;
    opt["rules_fired"] = run.opt_stats.rules_fired;
    j["opt"] = opt;
  }
  if (run.source_sim && run.target_sim) {
    j["stats"] = {{"source_candidates", run.source_sim->stats.candidates},
                  {"source_allowed", run.source_sim->stats.allowed},
                  {"target_candidates", run.target_sim->stats.candidates},
                  {"target_allowed", run.target_sim->stats.allowed}};
  }
  return j.dump();
}

}  // namespace lct::pipeline
