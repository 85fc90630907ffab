#pragma once

#include <string>

#include "lct/litmus/test.hpp"

namespace lct::pipeline {

// Emit a compilable C11 translation unit: one void P<k>(void) function per
// thread over extern shared globals (_Atomic for atomically accessed
// locations, volatile for non-atomic-only ones), with a manifest comment
// naming the observables. Deterministic. Throws DialectMismatch on asm
// input and UnsupportedConstruct for mixed atomic/non-atomic locations or
// threadless tests.
std::string prepare_source(const litmus::LitmusTest& test);

}  // namespace lct::pipeline
