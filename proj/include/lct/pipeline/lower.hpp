#pragma once

#include "lct/litmus/test.hpp"

namespace lct::pipeline {

// Internal reference lowering (the "builtin" profile): standard C11→AArch64
// mapping (relaxed→LDR/STR, acquire→LDAR, release and seq_cst stores→STLR,
// seq_cst fence→DMB ISH, fetch_add→LDADD family, exchange→SWP family) with
// -O1-shaped cleanups: constants and register identities fold, identical
// branch arms merge, dead RMW results decay to the store-only form (LDADD
// with no destination drops its acquire ordering). Direct symbolic
// addressing; deterministic. Throws DialectMismatch on asm input,
// UnsupportedConstruct on shapes outside the subset (64-bit locations,
// non-foldable == in stored values).
litmus::LitmusTest lower_builtin(const litmus::LitmusTest& test);

}  // namespace lct::pipeline
