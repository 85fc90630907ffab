#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "lct/engine/logfmt.hpp"
#include "lct/engine/paths.hpp"
#include "lct/engine/simulate.hpp"
#include "lct/litmus/error.hpp"
#include "lct/litmus/parse.hpp"
#include "lct/models/eval.hpp"
#include "lct/models/registry.hpp"

using namespace lct;
using namespace lct::engine;
using litmus::LitmusTest;
using litmus::parse_litmus;

namespace {

std::string slurp(const std::string& rel) {
  std::ifstream in(std::string(LCT_TEST_DATA_DIR) + "/" + rel);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

LitmusTest parse_file(const std::string& rel) { return parse_litmus(slurp(rel)); }

std::set<std::string> outcome_lines(const LitmusTest& t, const SimulationResult& r) {
  std::set<std::string> lines;
  for (const Outcome& o : r.outcomes.outcomes) lines.insert(render_outcome(t, o));
  return lines;
}

std::set<std::string> simulate_lines(const LitmusTest& t, const std::string& model) {
  return outcome_lines(t, simulate(t, models::lookup_model(model)));
}

}  // namespace

TEST_CASE("store buffering enumerates exactly four candidates") {
  LitmusTest t = parse_file("SB.litmus");
  std::vector<CandidateExecution> all = enumerate_all(t);
  CHECK(all.size() == 4);

  // Every candidate grounds both reads against one of the two writes of its
  // location; co holds init first, then the single store.
  for (const CandidateExecution& e : all) {
    CHECK(e.events.size() == 2 + 4);
    REQUIRE(e.co.count("x") == 1);
    REQUIRE(e.co.at("x").size() == 2);
    CHECK(e.events[e.co.at("x").front()].is_init);
    for (const Event& ev : e.events)
      if (is_read(ev.kind)) CHECK(e.rf_src[ev.id] >= 0);
  }
}

TEST_CASE("message passing outcomes per model") {
  LitmusTest t = parse_file("MP.litmus");

  auto sc = simulate_lines(t, "sc");
  CHECK(sc == std::set<std::string>{"1:r0=0; 1:r1=0;", "1:r0=0; 1:r1=1;",
                                    "1:r0=2; 1:r1=1;"});
  // Release/acquire already forbids the stale read; sc adds nothing here.
  CHECK(simulate_lines(t, "rc11_lite") == sc);
  CHECK(simulate_lines(t, "rc11_lb") == sc);
  CHECK(simulate_lines(t, "tso") == sc);

  SimulationResult r = simulate(t, models::lookup_model("sc"));
  CHECK(r.stats.candidates == 4);
  CHECK(r.stats.allowed == 3);
}

TEST_CASE("load buffering outcome sets split the rc11 variants") {
  LitmusTest t = parse_file("LB.litmus");

  std::set<std::string> no_lb{"0:r0=0; 1:r0=0;", "0:r0=0; 1:r0=1;", "0:r0=1; 1:r0=0;"};
  CHECK(simulate_lines(t, "rc11_lite") == no_lb);
  CHECK(simulate_lines(t, "sc") == no_lb);

  std::set<std::string> with_lb = no_lb;
  with_lb.insert("0:r0=1; 1:r0=1;");
  CHECK(simulate_lines(t, "rc11_lb") == with_lb);
}

TEST_CASE("rmw message passing: the split observable outcome") {
  LitmusTest t = parse_file("MP_RMW.litmus");

  // Release write to y synchronizes with the acquire fetch_add; reading x=0
  // after observing y=2 is impossible at source level.
  auto src = simulate_lines(t, "rc11_lite");
  CHECK(src == std::set<std::string>{"1:r1=0; y=1;", "1:r1=1; y=1;", "1:r1=1; y=2;"});
  CHECK(src.count("1:r1=0; y=2;") == 0);

  // The golden compiled form uses a relaxed STADD: the RMW no longer
  // acquires, so the stale read becomes architecturally allowed.
  LitmusTest g = parse_file("golden/MP_RMW.litmus");
  auto tgt = simulate_lines(g, "armv8_lite");
  CHECK(tgt.count("P1_r1=0; y=2;") == 1);
  CHECK(tgt == std::set<std::string>{"P1_r1=0; y=1;", "P1_r1=1; y=1;", "P1_r1=0; y=2;",
                                     "P1_r1=1; y=2;"});
}

TEST_CASE("rmw atomicity: no write can slip between the halves") {
  // Two competing fetch_adds on one location must serialize: final value 2.
  const char* text = R"(C incr

{ c=0; }

P0 {
  int r0 = atomic_fetch_add_explicit(c, 1, memory_order_relaxed);
}

P1 {
  int r0 = atomic_fetch_add_explicit(c, 1, memory_order_relaxed);
}

exists (c=2)
)";
  LitmusTest t = parse_litmus(text);
  auto lines = simulate_lines(t, "rc11_lb");
  CHECK(lines == std::set<std::string>{"c=2;"});

  // Both interleavings exist as candidates, both end at 2.
  SimulationResult r = simulate(t, models::lookup_model("rc11_lb"));
  CHECK(r.stats.allowed == 2);
}

TEST_CASE("witnesses replay to their outcome and satisfy the model") {
  LitmusTest t = parse_file("MP_RMW.litmus");
  const models::ModelSpec& model = models::lookup_model("rc11_lite");
  SimulationResult r = simulate(t, model);
  REQUIRE(r.outcomes.witnesses.size() == r.outcomes.size());
  for (const auto& [outcome, exec] : r.outcomes.witnesses) {
    CHECK(outcome_of(t, exec) == outcome);
    CHECK(models::check_model(model, exec).allowed);
  }
}

TEST_CASE("simulate is deterministic") {
  for (const char* file : {"MP.litmus", "LB.litmus", "SB.litmus", "MP_RMW.litmus",
                           "golden/MP_RMW.litmus", "LB3_opt.litmus"}) {
    CAPTURE(file);
    LitmusTest t = parse_file(file);
    const models::ModelSpec& m = models::lookup_model(
        t.dialect == litmus::Dialect::Source ? "rc11_lite" : "armv8_lite");
    SimulationResult a = simulate(t, m);
    SimulationResult b = simulate(t, m);
    CHECK(strip_time_lines(render_log(t, a)) == strip_time_lines(render_log(t, b)));
    CHECK(a.stats.candidates == b.stats.candidates);
    CHECK(a.stats.allowed == b.stats.allowed);
  }
}

TEST_CASE("dialect gate: armv8 refuses source tests and vice versa") {
  LitmusTest src = parse_file("MP.litmus");
  LitmusTest asm_t = parse_file("golden/LB.litmus");
  CHECK_THROWS_AS((void)simulate(src, models::lookup_model("armv8_lite")), Error);
  CHECK_THROWS_AS((void)simulate(asm_t, models::lookup_model("rc11_lite")), Error);
  CHECK_NOTHROW((void)simulate(src, models::lookup_model("sc")));
  CHECK_NOTHROW((void)simulate(asm_t, models::lookup_model("sc")));
  try {
    (void)simulate(src, models::lookup_model("armv8_lite"));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DialectMismatch);
  }
}

TEST_CASE("candidate cap raises CandidateExplosion") {
  LitmusTest t = parse_file("MP.litmus");
  EnumOptions opts;
  opts.candidate_cap = 2;
  CHECK_THROWS_AS((void)enumerate_all(t, opts), Error);
  try {
    (void)enumerate_all(t, opts);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CandidateExplosion);
  }
}

TEST_CASE("expired deadline raises Timeout on a large enumeration") {
  LitmusTest t = parse_file("LB3_unopt.litmus");
  EnumOptions opts;
  opts.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  CHECK_THROWS_AS((void)enumerate_all(t, opts), Error);
  try {
    (void)enumerate_all(t, opts);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Timeout);
  }
}

TEST_CASE("symbolic addresses ground through loaded pointers") {
  // The store goes through a register loaded from a constant-pool slot; the
  // outcome must land on x despite the address being symbolic during
  // enumeration.
  const char* text = R"(AArch64 indirect

{
  0:X2=cp;
  cp=x; x=0;
}

P0 {
  LDR X1, [X2]
  MOV W3, #7
  STR W3, [X1]
}

exists (x=7)
)";
  LitmusTest t = parse_litmus(text);
  auto lines = simulate_lines(t, "armv8_lite");
  CHECK(lines == std::set<std::string>{"x=7;"});
}

TEST_CASE("three-thread load buffering chains: opt and unopt agree") {
  LitmusTest opt = parse_file("LB3_opt.litmus");
  auto opt_lines = simulate_lines(opt, "armv8_lite");
  CHECK(opt_lines.size() == 8);  // no dependencies anywhere: full product

  LitmusTest unopt = parse_file("LB3_unopt.litmus");
  auto unopt_lines = simulate_lines(unopt, "armv8_lite");
  CHECK(unopt_lines == opt_lines);
}

TEST_CASE("acquire flavor distinction: LDAR forbids, LDAPR allows") {
  auto shape = [](const char* load_mnemonic) {
    std::string text = std::string(R"(AArch64 stlr_probe

{
  0:X1=x; 0:X3=y;
  1:X1=y; 1:X3=x;
  x=0; y=0;
}

P0 {
  MOV W0, #1
  STLR W0, [X1]
  )") + load_mnemonic + R"( r0, [X3]
}

P1 {
  MOV W0, #1
  STLR W0, [X1]
  )" + load_mnemonic + R"( r0, [X3]
}

exists (0:r0=0 /\ 1:r0=0)
)";
    return parse_litmus(text);
  };

  // STLR;LDAR forms SC pairs: the store-buffering outcome is forbidden.
  auto ldar = simulate_lines(shape("LDAR"), "armv8_lite");
  CHECK(ldar.count("P0_r0=0; P1_r0=0;") == 0);
  // STLR;LDAPR deliberately leaves it open.
  auto ldapr = simulate_lines(shape("LDAPR"), "armv8_lite");
  CHECK(ldapr.count("P0_r0=0; P1_r0=0;") == 1);
}

TEST_CASE("unroll replaces backward branches by stuck-terminated copies") {
  const char* text = R"(AArch64 spin

{
  0:X1=x; 1:X1=x;
  x=0;
}

P0 {
retry:
  LDR r0, [X1]
  CBZ r0, retry
}

P1 {
  MOV W0, #1
  STR W0, [X1]
}

exists (0:r0=1)
)";
  LitmusTest t = parse_litmus(text);

  CHECK_THROWS_AS((void)unroll(t, 0), Error);

  LitmusTest once = unroll(t, 1);
  bool has_stuck = false;
  for (const auto& ins : once.threads[0].code)
    has_stuck |= ins.kind == litmus::Instruction::Kind::Stuck;
  CHECK(has_stuck);
  // P1 is straight-line and untouched.
  CHECK(once.threads[1].code.size() == t.threads[1].code.size());

  // One attempt: the path that reads 0 loops into the stuck marker and is
  // dropped, so the only surviving outcome saw the store.
  SimulationResult r1 = simulate(t, models::lookup_model("armv8_lite"),
                                 SimOptions{.unroll_factor = 1});
  CHECK(outcome_lines(t, r1) == std::set<std::string>{"P0_r0=1;"});

  // Two attempts admit more paths but the same outcome set.
  SimulationResult r2 = simulate(t, models::lookup_model("armv8_lite"),
                                 SimOptions{.unroll_factor = 2});
  CHECK(outcome_lines(t, r2) == std::set<std::string>{"P0_r0=1;"});
  CHECK(r2.stats.candidates > r1.stats.candidates);

  // Unrolling a straight-line test is the identity.
  LitmusTest lb = parse_file("golden/LB.litmus");
  CHECK(litmus::test_equal(unroll(lb, 3), lb));
}

TEST_CASE("grid-shaped rewrites preserve load buffering outcomes") {
  // Shape variants the batch corpus leans on: a folded conditional with
  // identical arms, a dead added register, and an always-1 stored value.
  const char* variant = R"(C lb_variant

{ x=0; y=0; }

P0 {
  int r0 = atomic_load_explicit(x, memory_order_relaxed);
  int r1 = r0 + 0;
  if (r0 == r0) {
    atomic_store_explicit(y, 1 + ((r0 == r0) == 0), memory_order_relaxed);
  } else {
    atomic_store_explicit(y, 1, memory_order_relaxed);
  }
}

P1 {
  int r0 = atomic_load_explicit(y, memory_order_relaxed);
  atomic_store_explicit(x, 1, memory_order_relaxed);
}

exists (0:r0=1 /\ 1:r0=1)
)";
  LitmusTest t = parse_litmus(variant);
  LitmusTest lb = parse_file("LB.litmus");

  CHECK(simulate_lines(t, "rc11_lite") == simulate_lines(lb, "rc11_lite"));
  CHECK(simulate_lines(t, "rc11_lb") == simulate_lines(lb, "rc11_lb"));
}

TEST_CASE("conditionals fork in the source walker") {
  const char* text = R"(C cond

{ x=0; }

P0 {
  int r0 = atomic_load_explicit(x, memory_order_relaxed);
  int r1 = 0;
  if (r0 == 1) {
    r1 = 10;
  } else {
    r1 = 20;
  }
}

P1 {
  atomic_store_explicit(x, 1, memory_order_relaxed);
}

exists (0:r0=1 /\ 0:r1=10)
)";
  LitmusTest t = parse_litmus(text);
  auto lines = simulate_lines(t, "sc");
  CHECK(lines == std::set<std::string>{"0:r0=0; 0:r1=20;", "0:r0=1; 0:r1=10;"});
}

TEST_CASE("race detection separates guarded and unguarded non-atomic accesses") {
  const char* racy = R"(C mp_na_racy

{ x=0; y=0; }

P0 {
  *x = 1;
  atomic_store_explicit(y, 1, memory_order_release);
}

P1 {
  int r0 = atomic_load_explicit(y, memory_order_acquire);
  int r1 = *x;
}

exists (1:r0=1 /\ 1:r1=0)
)";
  const char* guarded = R"(C mp_na_guarded

{ x=0; y=0; }

P0 {
  *x = 1;
  atomic_store_explicit(y, 1, memory_order_release);
}

P1 {
  int r0 = atomic_load_explicit(y, memory_order_acquire);
  int r1 = 0;
  if (r0 == 1) {
    r1 = *x;
  }
}

exists (1:r0=1 /\ 1:r1=1)
)";
  const models::ModelSpec& model = models::lookup_model("rc11_lite");

  auto races = detect_races(parse_litmus(racy), model);
  REQUIRE(!races.empty());
  CHECK(races.front().first.loc == "x");
  CHECK(races.front().second.loc == "x");

  CHECK(detect_races(parse_litmus(guarded), model).empty());

  // Fully atomic tests never race.
  CHECK(detect_races(parse_file("MP.litmus"), model).empty());
  CHECK(detect_races(parse_file("LB.litmus"), models::lookup_model("rc11_lb")).empty());
}

TEST_CASE("log format: herd-style sections and time stripping") {
  LitmusTest t = parse_file("LB.litmus");
  SimulationResult r = simulate(t, models::lookup_model("rc11_lite"));
  std::string log = render_log(t, r);

  std::istringstream in(log);
  std::string line;
  std::getline(in, line);
  CHECK(line == "Test LB Allowed");
  std::getline(in, line);
  CHECK(line == "States 3");
  std::vector<std::string> states;
  for (int i = 0; i < 3; ++i) {
    std::getline(in, line);
    states.push_back(line);
  }
  CHECK(std::is_sorted(states.begin(), states.end()));
  CHECK(states[0] == "0:r0=0; 1:r0=0;");
  std::getline(in, line);
  CHECK(line.rfind("Time LB ", 0) == 0);

  CHECK(strip_time_lines(log).find("Time") == std::string::npos);
}

TEST_CASE("final register values respect widths and signedness") {
  const char* text = R"(C widths

{ int8_t b=0; uint16_t h=0; }

P0 {
  int r0 = atomic_load_explicit(b, memory_order_relaxed);
  int r1 = atomic_load_explicit(h, memory_order_relaxed);
}

P1 {
  atomic_store_explicit(b, 200, memory_order_relaxed);
  atomic_store_explicit(h, 70000, memory_order_relaxed);
}

exists (0:r0=0 /\ 0:r1=0)
)";
  LitmusTest t = parse_litmus(text);
  auto lines = simulate_lines(t, "sc");
  // 200 wraps to -56 in a signed byte; 70000 wraps to 4464 in 16 bits. The
  // register then widens those canonical values.
  bool saw_wrapped = false;
  for (const auto& l : lines) saw_wrapped |= l.find("0:r0=-56;") != std::string::npos;
  CHECK(saw_wrapped);
  bool saw_h = false;
  for (const auto& l : lines) saw_h |= l.find("0:r1=4464;") != std::string::npos;
  CHECK(saw_h);
}
