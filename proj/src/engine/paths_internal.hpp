#pragma once

#include "lct/engine/paths.hpp"

namespace lct::engine {

std::vector<ThreadPath> source_thread_paths(const litmus::LitmusTest& test,
                                            const litmus::Thread& thread);
std::vector<ThreadPath> asm_thread_paths(const litmus::LitmusTest& test,
                                         const litmus::Thread& thread);

}  // namespace lct::engine
