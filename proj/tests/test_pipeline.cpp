#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lct/engine/logfmt.hpp"
#include "lct/engine/simulate.hpp"
#include "lct/litmus/error.hpp"
#include "lct/litmus/parse.hpp"
#include "lct/models/registry.hpp"
#include "lct/pipeline/asm_to_litmus.hpp"
#include "lct/pipeline/batch.hpp"
#include "lct/pipeline/disasm.hpp"
#include "lct/pipeline/lower.hpp"
#include "lct/pipeline/prepare_source.hpp"
#include "lct/pipeline/profile.hpp"
#include "lct/pipeline/run.hpp"
#include "lct/pipeline/subprocess.hpp"
#include "lct/transforms/generate.hpp"

using namespace lct;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& rel) {
  std::ifstream in(std::string(LCT_TEST_DATA_DIR) + "/" + rel);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

litmus::LitmusTest load(const std::string& rel) { return litmus::parse_litmus(slurp(rel)); }

std::string read_path(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename Fn>
lct::ErrorKind error_kind(Fn&& fn) {
  try {
    fn();
  } catch (const lct::Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return lct::ErrorKind::SyntaxError;
}

std::vector<pipeline::CompilerProfile> test_profiles() {
  return pipeline::load_profiles_file(std::string(LCT_TEST_DATA_DIR) + "/profiles.json");
}

pipeline::PipelineOptions base_options() {
  pipeline::PipelineOptions opts;
  opts.data_dir = LCT_TEST_DATA_DIR;
  return opts;
}

// Fresh scratch directory per use; removed on destruction.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("lct-ut-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::set<std::string> outcome_lines(const litmus::LitmusTest& t, const std::string& model) {
  auto res = engine::simulate(t, models::lookup_model(model));
  std::set<std::string> lines;
  for (const auto& o : res.outcomes.outcomes) lines.insert(engine::render_outcome(t, o));
  return lines;
}

}  // namespace

// --- profiles ---

TEST_CASE("profiles: the checked-in document parses with all fields") {
  auto profiles = test_profiles();
  REQUIRE(profiles.size() == 4);

  const auto& builtin = pipeline::find_profile(profiles, "builtin-ref");
  CHECK(builtin.kind == pipeline::CompilerProfile::Kind::Builtin);
  CHECK(builtin.source_model == "rc11_lite");
  CHECK(builtin.target_model == "armv8_lite");

  const auto& lb = pipeline::find_profile(profiles, "builtin-ref-lb");
  CHECK(lb.source_model == "rc11_lb");

  const auto& golden = pipeline::find_profile(profiles, "golden");
  CHECK(golden.kind == pipeline::CompilerProfile::Kind::PrebuiltAsm);
  CHECK(golden.asm_dir == "golden");

  const auto& live = pipeline::find_profile(profiles, "live-local");
  CHECK(live.kind == pipeline::CompilerProfile::Kind::Live);
  REQUIRE(live.compile_command.size() == 8);
  CHECK(live.compile_command.front() == "${LCT_LIVE_CC}");
  CHECK(live.disassemble_command.back() == "{input}");
  CHECK(live.stage_timeout == std::chrono::seconds(60));

  CHECK(error_kind([&] { pipeline::find_profile(profiles, "nope"); }) == ErrorKind::BadConfig);
}

TEST_CASE("profiles: malformed documents are rejected with the offending detail") {
  CHECK(error_kind([] { pipeline::parse_profiles("{"); }) == ErrorKind::BadConfig);
  CHECK(error_kind([] { pipeline::parse_profiles(R"({"profiles": 3})"); }) ==
        ErrorKind::BadConfig);
  CHECK(error_kind([] {
          pipeline::parse_profiles(
              R"({"profiles": [{"name": "a", "kind": "builtin", "source_model": "nope",
                   "target_model": "armv8_lite"}]})");
        }) == ErrorKind::UnknownModel);
  CHECK(error_kind([] {
          pipeline::parse_profiles(
              R"({"profiles": [{"name": "a", "kind": "warp", "source_model": "sc",
                   "target_model": "sc"}]})");
        }) == ErrorKind::BadConfig);
  // live without an {input} placeholder
  CHECK(error_kind([] {
          pipeline::parse_profiles(
              R"({"profiles": [{"name": "a", "kind": "live", "source_model": "sc",
                   "target_model": "sc", "compile_command": ["cc", "-o", "{output}"],
                   "disassemble_command": ["objdump", "{input}"]}]})");
        }) == ErrorKind::BadConfig);
  // duplicate names
  CHECK(error_kind([] {
          pipeline::parse_profiles(
              R"({"profiles": [
                   {"name": "a", "kind": "builtin", "source_model": "sc", "target_model": "sc"},
                   {"name": "a", "kind": "builtin", "source_model": "sc", "target_model": "sc"}]})");
        }) == ErrorKind::BadConfig);
}

// --- subprocess ---

TEST_CASE("subprocess: captures stdout, stderr and exit codes") {
  auto echo = pipeline::run_process({"/bin/echo", "hello"}, std::chrono::seconds(5));
  CHECK(echo.exit_code == 0);
  CHECK(echo.out == "hello\n");
  CHECK(echo.err.empty());
  CHECK_FALSE(echo.timed_out);

  auto fail = pipeline::run_process({"/bin/sh", "-c", "echo oops >&2; exit 3"},
                                    std::chrono::seconds(5));
  CHECK(fail.exit_code == 3);
  CHECK(fail.err == "oops\n");
}

TEST_CASE("subprocess: a hung tool is killed at the timeout") {
  auto res = pipeline::run_process({"/bin/sleep", "30"}, std::chrono::seconds(1));
  CHECK(res.timed_out);
}

TEST_CASE("subprocess: missing binaries and unset env vars are ToolNotFound") {
  CHECK(error_kind([] {
          pipeline::run_process({"/nonexistent/tool-xyz"}, std::chrono::seconds(5));
        }) == ErrorKind::ToolNotFound);

  ::setenv("LCT_UT_TOOL", "/bin/echo", 1);
  CHECK(pipeline::expand_env("${LCT_UT_TOOL}") == "/bin/echo");
  CHECK(pipeline::expand_env("pre-${LCT_UT_TOOL}-post") == "pre-/bin/echo-post");
  ::unsetenv("LCT_UT_TOOL");
  CHECK(error_kind([] { pipeline::expand_env("${LCT_UT_TOOL}"); }) == ErrorKind::ToolNotFound);
  CHECK(error_kind([] { pipeline::expand_env("${UNTERMINATED"); }) == ErrorKind::BadConfig);
}

// --- prepare_source ---

TEST_CASE("prepare_source: MP becomes a C11 unit with atomic globals") {
  auto unit = pipeline::prepare_source(load("MP.litmus"));
  CHECK(unit.find("// MP: litmus translation unit") == 0);
  CHECK(unit.find("// observables: 1:r0 1:r1") != std::string::npos);
  CHECK(unit.find("#include <stdatomic.h>") != std::string::npos);
  CHECK(unit.find("extern _Atomic int32_t x;") != std::string::npos);
  CHECK(unit.find("extern _Atomic int32_t y;") != std::string::npos);
  CHECK(unit.find("void P0(void) {") != std::string::npos);
  CHECK(unit.find("atomic_store_explicit(&x, 1, memory_order_relaxed);") != std::string::npos);
  CHECK(unit.find("atomic_store_explicit(&y, 2, memory_order_release);") != std::string::npos);
  CHECK(unit.find("r0 = atomic_load_explicit(&y, memory_order_acquire);") != std::string::npos);
  CHECK(unit.find("int32_t r0 = 0;") != std::string::npos);
  CHECK(unit.find("(void)r0;") != std::string::npos);
}

TEST_CASE("prepare_source: non-atomic-only locations are volatile, never _Atomic") {
  auto tests = transforms::generate_pattern_tests(
      {transforms::PatternSpec{"MP", "na", litmus::Width::B16, false, 0, 0}});
  auto unit = pipeline::prepare_source(tests.at(0));
  CHECK(unit.find("extern volatile uint16_t x;") != std::string::npos);
  CHECK(unit.find("atomic_") == std::string::npos);
  CHECK(unit.find("r0 = y;") != std::string::npos);
}

TEST_CASE("prepare_source: rejects asm input and mixed atomicity") {
  CHECK(error_kind([] { pipeline::prepare_source(load("golden/LB.litmus")); }) ==
        ErrorKind::DialectMismatch);

  auto mixed = litmus::parse_litmus(
      "C mixed\n{ x=0; }\nP0 {\n  atomic_store_explicit(x, 1, memory_order_relaxed);\n}\n"
      "P1 {\n  int r0 = x;\n}\nexists (1:r0=1)\n");
  CHECK(error_kind([&] { pipeline::prepare_source(mixed); }) == ErrorKind::UnsupportedConstruct);
}

// --- disassembly parsing ---

TEST_CASE("disasm: the objdump fixture parses to relocated instructions") {
  auto parsed = pipeline::parse_objdump(slurp("disasm/MP.objdump"));
  REQUIRE(parsed.functions.size() == 2);
  CHECK(parsed.functions[0].first == "P0");
  CHECK(parsed.functions[1].first == "P1");

  using K = litmus::Instruction::Kind;
  const auto& p0 = parsed.functions[0].second;
  REQUIRE(p0.size() == 7);  // ret dropped
  CHECK(p0[0].kind == K::MovImm);
  CHECK(p0[0].dst == "W8");
  CHECK(p0[0].imm == 1);
  CHECK(p0[1].kind == K::Adrp);
  CHECK(p0[1].dst == "X9");
  CHECK(p0[1].sym == "x");
  CHECK(p0[2].kind == K::Store);
  CHECK(p0[2].src == "W8");
  CHECK(p0[2].addr.form == litmus::AddrOperand::Form::RegLo12);
  CHECK(p0[2].addr.base == "X9");
  CHECK(p0[2].addr.sym == "x");
  CHECK(p0[4].kind == K::Add);
  CHECK(p0[4].sym == "y");
  CHECK(p0[5].imm == 2);
  CHECK(p0[6].kind == K::Store);
  CHECK(p0[6].order == litmus::MemOrder::Rel);
  CHECK(p0[6].addr.form == litmus::AddrOperand::Form::Reg);
  CHECK(p0[6].addr.base == "X10");

  const auto& p1 = parsed.functions[1].second;
  REQUIRE(p1.size() == 5);
  CHECK(p1[2].kind == K::Load);
  CHECK(p1[2].order == litmus::MemOrder::Acq);
  CHECK(p1[2].dst == "W10");
  CHECK(p1[4].kind == K::Load);
  CHECK(p1[4].order == litmus::MemOrder::Rlx);
  CHECK(p1[4].addr.sym == "x");

  CHECK(parsed.symbols.relocs.size() == 7);
  CHECK(parsed.symbols.by_offset.at({"P0", 0x4}) == "x");
  CHECK(parsed.symbols.by_offset.at({"P1", 0x20}) == "y");
}

TEST_CASE("disasm: branches become labels scoped to their function") {
  std::string text =
      "0000000000000000 <P0>:\n"
      "   0:\t34000060 \tcbz\tw0, c <P0+0xc>\n"
      "   4:\t52800028 \tmov\tw8, #0x1\n"
      "   8:\t14000002 \tb\t10 <P0+0x10>\n"
      "   c:\t52800048 \tmov\tw8, #0x2\n"
      "  10:\td65f03c0 \tret\n";
  auto parsed = pipeline::parse_objdump(text);
  using K = litmus::Instruction::Kind;
  const auto& code = parsed.functions.at(0).second;
  REQUIRE(code.size() == 6);  // cbz, mov, b, label, mov, trailing label
  CHECK(code[0].kind == K::Cbz);
  CHECK(code[0].label == "Lc");
  CHECK(code[3].kind == K::Label);
  CHECK(code[3].label == "Lc");
  CHECK(code[5].kind == K::Label);
  CHECK(code[5].label == "L10");
}

TEST_CASE("disasm: malformed inputs raise typed errors") {
  CHECK(error_kind([] { pipeline::parse_objdump("nothing here\n"); }) ==
        ErrorKind::DisassembleFailed);
  // adrp with its relocation missing cannot be mapped to a symbol
  CHECK(error_kind([] {
          pipeline::parse_objdump(
              "0000000000000000 <P0>:\n   0:\t90000009 \tadrp\tx9, 0 <P0>\n");
        }) == ErrorKind::UnmappedAddress);
  CHECK(error_kind([] {
          pipeline::parse_objdump(
              "0000000000000000 <P0>:\n   0:\t94000000 \tbl\t0 <P0>\n");
        }) == ErrorKind::UnsupportedConstruct);
  CHECK(error_kind([] {
          pipeline::parse_objdump(
              "0000000000000000 <P0>:\n   0:\t1e2a1234 \tfmadd\ts0, s1, s2, s3\n");
        }) == ErrorKind::UnknownMnemonic);
  // branch into another function
  CHECK(error_kind([] {
          pipeline::parse_objdump(
              "0000000000000000 <P0>:\n   0:\t14000008 \tb\t20 <P1>\n"
              "0000000000000020 <P1>:\n  20:\td65f03c0 \tret\n");
        }) == ErrorKind::UnsupportedConstruct);
}

TEST_CASE("disasm: LSE atomics and fences decode with their orderings") {
  std::string text =
      "0000000000000000 <P0>:\n"
      "   0:\tb8e10002 \tldaddal\tw1, w2, [x0]\n"
      "   4:\tb8a10002 \tldadda\tw1, w2, [x0]\n"
      "   8:\tb82103e2 \tstadd\tw1, [x31]\n"
      "   c:\tb8e18002 \tswpal\tw1, w2, [x0]\n"
      "  10:\t88e17c02 \tcasal\tw1, w2, [x0]\n"
      "  14:\td5033bbf \tdmb\tish\n"
      "  18:\td50339bf \tdmb\tishld\n"
      "  1c:\tb86a0013 \tldadd\tw10, wzr, [x0]\n";
  auto parsed = pipeline::parse_objdump(text);
  using K = litmus::Instruction::Kind;
  const auto& code = parsed.functions.at(0).second;
  REQUIRE(code.size() == 8);
  CHECK(code[0].kind == K::LdAdd);
  CHECK(code[0].order == litmus::MemOrder::Acq);
  CHECK(code[0].order2 == litmus::MemOrder::Rel);
  CHECK(code[0].src == "W1");
  CHECK(code[0].dst == "W2");
  CHECK(code[1].order == litmus::MemOrder::Acq);
  CHECK(code[1].order2 == litmus::MemOrder::Rlx);
  CHECK(code[2].kind == K::LdAdd);
  CHECK(code[2].dst.empty());
  CHECK(code[3].kind == K::Swp);
  CHECK(code[4].kind == K::Cas);
  CHECK(code[4].dst == "W1");  // expected-value register
  CHECK(code[5].kind == K::Dmb);
  CHECK(code[5].fence == litmus::FenceKind::Full);
  CHECK(code[6].fence == litmus::FenceKind::Ld);
  // ldadd with a wzr destination is the store-only alias
  CHECK(code[7].kind == K::LdAdd);
  CHECK(code[7].dst.empty());
}

// --- reconstruction ---

TEST_CASE("reconstruction: MP disassembly becomes the expected assembly test") {
  auto src = load("MP.litmus");
  auto parsed = pipeline::parse_objdump(slurp("disasm/MP.objdump"));
  auto rec = pipeline::asm_to_litmus(parsed, src);
  CHECK(rec.warnings.empty());

  const auto& t = rec.test;
  CHECK(t.dialect == litmus::Dialect::Asm);
  CHECK(t.name == "MP");
  REQUIRE(t.threads.size() == 2);

  using K = litmus::Instruction::Kind;
  const auto& p0 = t.threads[0].code;
  REQUIRE(p0.size() == 4);  // address materialization folded away
  CHECK(p0[0].kind == K::MovImm);
  CHECK(p0[1].kind == K::Store);
  CHECK(p0[1].addr.form == litmus::AddrOperand::Form::Sym);
  CHECK(p0[1].addr.sym == "x");
  CHECK(p0[3].kind == K::Store);
  CHECK(p0[3].addr.sym == "y");
  CHECK(p0[3].order == litmus::MemOrder::Rel);

  const auto& p1 = t.threads[1].code;
  REQUIRE(p1.size() == 2);
  CHECK(p1[0].kind == K::Load);
  CHECK(p1[0].dst == "r0");
  CHECK(p1[0].addr.sym == "y");
  CHECK(p1[0].order == litmus::MemOrder::Acq);
  CHECK(p1[1].dst == "r1");
  CHECK(p1[1].addr.sym == "x");

  // Same guarantees on both sides: outcome sets agree modulo naming.
  auto src_lines = outcome_lines(src, "rc11_lite");
  auto res = engine::simulate(t, models::lookup_model("armv8_lite"));
  CHECK(res.outcomes.size() == src_lines.size());
  CHECK(src_lines.count("1:r0=2; 1:r1=0;") == 0);  // stale-data outcome stays excluded
}

TEST_CASE("reconstruction: thread/function mismatches are flagged, never guessed") {
  auto src = load("MP.litmus");
  auto parsed = pipeline::parse_objdump(slurp("disasm/MP.objdump"));

  auto renamed = parsed;
  renamed.functions[1].first = "helper";
  CHECK(error_kind([&] { pipeline::asm_to_litmus(renamed, src); }) ==
        ErrorKind::UnsupportedConstruct);

  auto missing = parsed;
  missing.functions.pop_back();
  CHECK(error_kind([&] { pipeline::asm_to_litmus(missing, src); }) ==
        ErrorKind::UnsupportedConstruct);

  auto extra = parsed;
  extra.functions.push_back({"P7", parsed.functions[1].second});
  CHECK(error_kind([&] { pipeline::asm_to_litmus(extra, src); }) ==
        ErrorKind::UnsupportedConstruct);
}

TEST_CASE("reconstruction: a compiled-away observable warns and reads zero") {
  auto src = load("MP.litmus");
  auto parsed = pipeline::parse_objdump(slurp("disasm/MP.objdump"));
  // Drop P1's second load (the r1 definition) as an optimizer would.
  auto& p1 = parsed.functions[1].second;
  p1.erase(p1.begin() + 3, p1.end());
  auto rec = pipeline::asm_to_litmus(parsed, src);
  REQUIRE(rec.warnings.size() == 1);
  CHECK(rec.warnings[0].find("1:r1") != std::string::npos);

  auto res = engine::simulate(rec.test, models::lookup_model("armv8_lite"));
  for (const auto& o : res.outcomes.outcomes) {
    auto it = o.bind.find(litmus::ObservableKey::reg(1, "r1"));
    REQUIRE(it != o.bind.end());
    CHECK(it->second == litmus::Value::integer(0));
  }
}

// --- builtin lowering ---

TEST_CASE("lowering: MP maps to the standard instruction selection") {
  auto lowered = pipeline::lower_builtin(load("MP.litmus"));
  CHECK(lowered.dialect == litmus::Dialect::Asm);

  using K = litmus::Instruction::Kind;
  const auto& p0 = lowered.threads[0].code;
  REQUIRE(p0.size() == 4);
  CHECK(p0[0].kind == K::MovImm);
  CHECK(p0[0].dst == "W0");
  CHECK(p0[0].imm == 1);
  CHECK(p0[1].kind == K::Store);
  CHECK(p0[1].addr.base == "X1");
  CHECK(p0[1].order == litmus::MemOrder::Rlx);
  CHECK(p0[2].dst == "W2");
  CHECK(p0[3].order == litmus::MemOrder::Rel);

  const auto& p1 = lowered.threads[1].code;
  REQUIRE(p1.size() == 2);
  CHECK(p1[0].kind == K::Load);
  CHECK(p1[0].dst == "r0");
  CHECK(p1[0].order == litmus::MemOrder::Acq);
  CHECK(p1[1].dst == "r1");
  CHECK(p1[1].order == litmus::MemOrder::Rlx);

  using litmus::Value;
  CHECK(lowered.init.registers.at({0, "X1"}) == Value::address("x"));
  CHECK(lowered.init.registers.at({0, "X3"}) == Value::address("y"));
  CHECK(lowered.init.registers.at({1, "X1"}) == Value::address("y"));
  CHECK(lowered.init.registers.at({1, "X3"}) == Value::address("x"));

  // Rendered form parses back and simulates identically.
  auto reparsed = litmus::parse_litmus(litmus::render_litmus(lowered));
  CHECK(litmus::test_equal(lowered, reparsed));
  CHECK(outcome_lines(lowered, "armv8_lite") == outcome_lines(reparsed, "armv8_lite"));
}

TEST_CASE("lowering: every LB dressing folds to the plain three-instruction body") {
  for (int v0 = 1; v0 <= 7; ++v0)
    for (int v1 : {1, 4, 6}) {
      auto tests = transforms::generate_pattern_tests(
          {transforms::PatternSpec{"LB", "rlx", litmus::Width::B32, true, v0, v1}});
      auto lowered = pipeline::lower_builtin(tests.at(0));
      for (const auto& t : lowered.threads) {
        int variant = t.id == 0 ? v0 : v1;
        using K = litmus::Instruction::Kind;
        size_t expect = variant == 7 ? 4 : 3;  // the extra load survives
        REQUIRE(t.code.size() == expect);
        CHECK(t.code[0].kind == K::Load);
        CHECK(t.code[0].dst == "r0");
        CHECK(t.code[expect - 2].kind == K::MovImm);
        CHECK(t.code[expect - 2].imm == 1);
        CHECK(t.code[expect - 1].kind == K::Store);
        for (const auto& ins : t.code) {
          CHECK(ins.kind != K::Add);
          CHECK(ins.kind != K::Subs);
          CHECK(ins.kind != K::BCond);
        }
      }
    }
}

TEST_CASE("lowering: dead RMW results decay to the store-only form") {
  auto lowered = pipeline::lower_builtin(load("MP_RMW.litmus"));
  using K = litmus::Instruction::Kind;
  const auto& p1 = lowered.threads[1].code;
  REQUIRE(p1.size() == 3);
  CHECK(p1[0].kind == K::MovImm);
  CHECK(p1[1].kind == K::LdAdd);
  CHECK(p1[1].dst.empty());                       // result dropped
  CHECK(p1[1].order == litmus::MemOrder::Rlx);    // acquire silently lost
  CHECK(p1[1].order2 == litmus::MemOrder::Rlx);
  CHECK(p1[2].kind == K::Load);

  // The loss is observable: the target admits the outcome rc11_lite forbids.
  auto src_lines = outcome_lines(load("MP_RMW.litmus"), "rc11_lite");
  auto tgt_lines = outcome_lines(lowered, "armv8_lite");
  CHECK(src_lines.count("1:r1=0; y=2;") == 0);
  CHECK(tgt_lines.count("P1_r1=0; y=2;") == 1);
}

TEST_CASE("lowering: a live RMW result keeps its register and its acquire") {
  auto src = load("MP_RMW_local.litmus");
  auto plan = transforms::PersistencePlan::auto_for(src);
  auto persisted = transforms::persist_locals(src, plan);
  auto lowered = pipeline::lower_builtin(persisted);

  using K = litmus::Instruction::Kind;
  const auto& p1 = lowered.threads[1].code;
  REQUIRE(p1.size() == 5);  // mov, ldadd, ldr, str, str
  CHECK(p1[1].kind == K::LdAdd);
  CHECK(p1[1].dst == "r0");
  CHECK(p1[1].order == litmus::MemOrder::Acq);
  CHECK(p1[3].kind == K::Store);
  CHECK(p1[3].src == "r0");
  CHECK(lowered.init.registers.at({1, "X5"}) == litmus::Value::address("q1_r0"));
  CHECK(lowered.init.registers.at({1, "X7"}) == litmus::Value::address("q1_r1"));
}

TEST_CASE("lowering: width suffixes follow the location width") {
  auto tests = transforms::generate_pattern_tests(
      {transforms::PatternSpec{"MP", "rlx", litmus::Width::B8, false, 0, 0}});
  auto lowered = pipeline::lower_builtin(tests.at(0));
  for (const auto& t : lowered.threads)
    for (const auto& ins : t.code)
      if (ins.is_memory_access()) CHECK(ins.width_suffix == litmus::Width::B8);
}

TEST_CASE("lowering: general branches fall back to compare-and-branch code") {
  auto src = litmus::parse_litmus(
      "C branchy\n{ x=0; y=0; }\n"
      "P0 {\n  int r0 = atomic_load_explicit(x, memory_order_relaxed);\n"
      "  if (r0 == 1) {\n    atomic_store_explicit(y, 7, memory_order_relaxed);\n"
      "  } else {\n    atomic_store_explicit(y, 9, memory_order_relaxed);\n  }\n}\n"
      "exists (y=9)\n");
  auto lowered = pipeline::lower_builtin(src);
  using K = litmus::Instruction::Kind;
  const auto& code = lowered.threads[0].code;
  std::vector<K> kinds;
  for (const auto& ins : code) kinds.push_back(ins.kind);
  CHECK(kinds == std::vector<K>{K::Load, K::Subs, K::BCond, K::MovImm, K::Store, K::B,
                                K::Label, K::MovImm, K::Store, K::Label});
  // x is 0, so only the else arm runs.
  CHECK(outcome_lines(lowered, "armv8_lite") == std::set<std::string>{"y=9;"});
  CHECK(outcome_lines(src, "rc11_lite") == std::set<std::string>{"y=9;"});
}

TEST_CASE("lowering: rejects asm input, 64-bit locations and odd orderings") {
  CHECK(error_kind([] { pipeline::lower_builtin(load("golden/LB.litmus")); }) ==
        ErrorKind::DialectMismatch);

  auto wide = load("MP.litmus");
  wide.init.locations["x"].width = litmus::Width::B64;
  CHECK(error_kind([&] { pipeline::lower_builtin(wide); }) == ErrorKind::UnsupportedConstruct);
}

// --- run_pipeline ---

TEST_CASE("pipeline: builtin profile on MP is Equal with a full artifact tree") {
  auto profiles = test_profiles();
  auto opts = base_options();
  TempDir tmp("mp-artifacts");
  opts.out_dir = tmp.path.string();

  auto run =
      pipeline::run_pipeline(load("MP.litmus"), pipeline::find_profile(profiles, "builtin-ref"), opts);
  REQUIRE_FALSE(run.failed());
  CHECK(run.classification() == "Equal");
  CHECK(run.report->novel.empty());
  CHECK(run.report->missing.empty());

  std::vector<std::string> tags;
  for (const auto& [tag, secs] : run.stage_seconds) {
    tags.push_back(tag);
    CHECK(secs >= 0.0);
  }
  CHECK(tags == std::vector<std::string>{"prepare", "race-check", "compile", "simulate-source",
                                         "simulate-target", "compare"});

  fs::path dir = tmp.path / "builtin-ref" / "MP";
  for (const char* name : {"src.litmus", "unit.c", "tgt.litmus", "src.log", "tgt.log", "diff.json"})
    CHECK(fs::exists(dir / name));

  auto log = read_path(dir / "src.log");
  CHECK(log.find("Test MP Allowed") == 0);
  CHECK(log.find("States 3") != std::string::npos);
  CHECK(log.find("Time MP") != std::string::npos);

  auto j = nlohmann::json::parse(read_path(dir / "diff.json"));
  CHECK(j["test"] == "MP");
  CHECK(j["profile"] == "builtin-ref");
  CHECK(j["classification"] == "Equal");
  CHECK(j["novel"].empty());
  CHECK(j.count("stats") == 1);
  CHECK(read_path(dir / "diff.json").find("seconds") == std::string::npos);
}

TEST_CASE("pipeline: builtin profile on LB is Positive with exactly the reordering outcome") {
  auto profiles = test_profiles();
  auto run = pipeline::run_pipeline(load("LB.litmus"),
                                    pipeline::find_profile(profiles, "builtin-ref"), base_options());
  REQUIRE_FALSE(run.failed());
  CHECK(run.classification() == "Positive");
  REQUIRE(run.report->novel.size() == 1);
  CHECK(engine::render_outcome(*run.source_test, *run.report->novel.begin()) ==
        "0:r0=1; 1:r0=1;");

  // Under rc11_lb the same difference is legal and the verdict flips.
  auto lb = pipeline::run_pipeline(load("LB.litmus"),
                                   pipeline::find_profile(profiles, "builtin-ref-lb"),
                                   base_options());
  CHECK(lb.classification() == "Equal");
}

TEST_CASE("pipeline: prebuilt golden profile reproduces the RMW-split difference") {
  auto profiles = test_profiles();
  auto run = pipeline::run_pipeline(load("MP_RMW.litmus"),
                                    pipeline::find_profile(profiles, "golden"), base_options());
  REQUIRE_FALSE(run.failed());
  CHECK(run.classification() == "Positive");
  REQUIRE(run.report->novel.size() == 1);
  CHECK(engine::render_outcome(*run.source_test, *run.report->novel.begin()) == "1:r1=0; y=2;");
}

TEST_CASE("pipeline: persistence flips the masked heisenbug from Equal to Positive") {
  auto profiles = test_profiles();
  const auto& golden = pipeline::find_profile(profiles, "golden");
  auto src = load("MP_RMW_local.litmus");

  auto masked = pipeline::run_pipeline(src, golden, base_options());
  REQUIRE_FALSE(masked.failed());
  CHECK(masked.classification() == "Equal");

  auto opts = base_options();
  opts.persist = pipeline::PersistMode::Auto;
  auto exposed = pipeline::run_pipeline(src, golden, opts);
  REQUIRE_FALSE(exposed.failed());
  CHECK(exposed.test_name == "MP_RMW_local_persist");
  CHECK(exposed.classification() == "Positive");
  REQUIRE(exposed.report->novel.size() == 1);
  CHECK(engine::render_outcome(*exposed.source_test, *exposed.report->novel.begin()) ==
        "1:r1=0; q1_r0=1; q1_r1=0;");

  // The correct builtin compiler stays Equal even with persistence.
  auto correct = pipeline::run_pipeline(src, pipeline::find_profile(profiles, "builtin-ref"), opts);
  CHECK(correct.classification() == "Equal");
}

TEST_CASE("pipeline: a missing prebuilt file is a compile-stage failure") {
  auto profiles = test_profiles();
  auto opts = base_options();
  TempDir tmp("missing-prebuilt");
  opts.out_dir = tmp.path.string();

  auto tests = transforms::generate_pattern_tests(
      {transforms::PatternSpec{"SB", "rlx", litmus::Width::B32, true, 0, 0}});
  auto run = pipeline::run_pipeline(tests.at(0), pipeline::find_profile(profiles, "golden"), opts);
  REQUIRE(run.failed());
  CHECK(*run.failure_stage == "compile");
  CHECK(run.failure_message->find("CompileFailed") == 0);
  CHECK(run.classification() == "Failure");

  fs::path dir = tmp.path / "golden" / run.test_name;
  CHECK(fs::exists(dir / "src.litmus"));
  CHECK_FALSE(fs::exists(dir / "tgt.litmus"));
  CHECK_FALSE(fs::exists(dir / "src.log"));
  CHECK_FALSE(fs::exists(dir / "diff.json"));

  auto j = nlohmann::json::parse(pipeline::diff_record_json(run));
  CHECK(j["classification"] == "Failure");
  CHECK(j["failure"]["stage"] == "compile");
}

TEST_CASE("pipeline: racy sources are filtered, or compared when the policy says so") {
  auto profiles = test_profiles();
  auto tests = transforms::generate_pattern_tests(
      {transforms::PatternSpec{"MP", "na", litmus::Width::B32, true, 0, 0}});
  const auto& prof = pipeline::find_profile(profiles, "builtin-ref");

  auto filtered = pipeline::run_pipeline(tests.at(0), prof, base_options());
  REQUIRE_FALSE(filtered.failed());
  CHECK(filtered.classification() == "UBFiltered");
  CHECK_FALSE(filtered.source_sim.has_value());
  auto j = nlohmann::json::parse(pipeline::diff_record_json(filtered));
  CHECK(j["ub_filtered"] == true);

  auto opts = base_options();
  opts.race_policy = diffcheck::RacePolicy::CompareAnyway;
  auto compared = pipeline::run_pipeline(tests.at(0), prof, opts);
  REQUIRE_FALSE(compared.failed());
  CHECK(compared.classification() != "UBFiltered");
  CHECK(compared.source_sim.has_value());
}

TEST_CASE("pipeline: live profile without its tools fails honestly at compile") {
  ::unsetenv("LCT_LIVE_CC");
  ::unsetenv("LCT_LIVE_OBJDUMP");
  auto profiles = test_profiles();
  auto run = pipeline::run_pipeline(load("MP.litmus"),
                                    pipeline::find_profile(profiles, "live-local"), base_options());
  REQUIRE(run.failed());
  CHECK(*run.failure_stage == "compile");
  CHECK(run.failure_message->find("ToolNotFound") == 0);
}

TEST_CASE("pipeline: repeated runs are byte-identical modulo Time lines") {
  auto profiles = test_profiles();
  const auto& prof = pipeline::find_profile(profiles, "builtin-ref");

  TempDir tmp_a("det-a");
  TempDir tmp_b("det-b");
  auto opts_a = base_options();
  opts_a.out_dir = tmp_a.path.string();
  auto opts_b = base_options();
  opts_b.out_dir = tmp_b.path.string();

  auto run_a = pipeline::run_pipeline(load("MP_RMW.litmus"), prof, opts_a);
  auto run_b = pipeline::run_pipeline(load("MP_RMW.litmus"), prof, opts_b);
  REQUIRE_FALSE(run_a.failed());
  REQUIRE_FALSE(run_b.failed());

  CHECK(pipeline::diff_record_json(run_a) == pipeline::diff_record_json(run_b));
  for (const char* name : {"src.litmus", "unit.c", "tgt.litmus", "diff.json"})
    CHECK(read_path(tmp_a.path / "builtin-ref" / "MP_RMW" / name) ==
          read_path(tmp_b.path / "builtin-ref" / "MP_RMW" / name));
  for (const char* name : {"src.log", "tgt.log"})
    CHECK(engine::strip_time_lines(read_path(tmp_a.path / "builtin-ref" / "MP_RMW" / name)) ==
          engine::strip_time_lines(read_path(tmp_b.path / "builtin-ref" / "MP_RMW" / name)));
}

// --- run_batch ---

TEST_CASE("batch: cross product with conserved counts, any parallelism") {
  auto profiles = test_profiles();
  std::vector<pipeline::CompilerProfile> two = {
      pipeline::find_profile(profiles, "builtin-ref"),
      pipeline::find_profile(profiles, "builtin-ref-lb")};
  std::vector<litmus::LitmusTest> tests = {load("MP.litmus"), load("LB.litmus"),
                                           load("SB.litmus")};

  auto serial = pipeline::run_batch(tests, two, 1, base_options());
  auto parallel = pipeline::run_batch(tests, two, 4, base_options());

  REQUIRE(serial.total() == 6);
  REQUIRE(serial.items.size() == parallel.items.size());
  for (size_t i = 0; i < serial.items.size(); ++i) {
    CHECK(serial.items[i].test == parallel.items[i].test);
    CHECK(serial.items[i].profile == parallel.items[i].profile);
    CHECK(serial.items[i].classification == parallel.items[i].classification);
    CHECK(serial.items[i].diff_json == parallel.items[i].diff_json);
  }

  // test-major, profile-minor order
  CHECK(serial.items[0].test == "MP");
  CHECK(serial.items[0].profile == "builtin-ref");
  CHECK(serial.items[1].test == "MP");
  CHECK(serial.items[1].profile == "builtin-ref-lb");
  CHECK(serial.items[2].test == "LB");

  int sum = 0;
  for (const auto& [profile, counts] : serial.per_profile)
    for (const auto& [cls, n] : counts) sum += n;
  CHECK(sum == serial.total());

  // LB is the only Positive under rc11_lite; none under rc11_lb.
  CHECK(serial.per_profile["builtin-ref"]["Positive"] == 1);
  CHECK(serial.per_profile["builtin-ref-lb"].count("Positive") == 0);

  CHECK(serial.render() == parallel.render());
  CHECK(serial.render().find("profile") == 0);
  CHECK(pipeline::run_batch(tests, two, 1, base_options()).render() == serial.render());
}

TEST_CASE("batch: one failing run never sinks the rest") {
  auto profiles = test_profiles();
  std::vector<pipeline::CompilerProfile> golden = {pipeline::find_profile(profiles, "golden")};
  auto generated = transforms::generate_pattern_tests(
      {transforms::PatternSpec{"SB", "rlx", litmus::Width::B32, true, 0, 0}});
  std::vector<litmus::LitmusTest> tests = {load("MP_RMW.litmus"), generated.at(0),
                                           load("MP_RMW_local.litmus")};

  auto summary = pipeline::run_batch(tests, golden, 2, base_options());
  REQUIRE(summary.total() == 3);
  CHECK(summary.items[0].classification == "Positive");
  CHECK(summary.items[1].classification == "Failure");
  CHECK_FALSE(summary.items[1].failure_message.empty());
  CHECK(summary.items[2].classification == "Equal");
  CHECK(summary.count("Failure") == 1);
}

TEST_CASE("batch: parallelism below one is rejected") {
  CHECK(error_kind([] {
          pipeline::run_batch({}, {}, 0, pipeline::PipelineOptions{});
        }) == ErrorKind::BadConfig);
}
