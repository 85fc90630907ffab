#pragma once

#include "cursor.hpp"
#include "lct/litmus/test.hpp"

namespace lct::litmus::detail {

// Shared by both dialect parsers.
void parse_init_block(Cursor& c, LitmusTest& test);
FinalPredicate parse_final_predicate(Cursor& c);
std::vector<ObservableKey> parse_locations_directive(Cursor& c);
ObservableKey parse_observable(Cursor& c);

// Trailing sections: the mandatory final predicate and an optional
// `locations` directive, in either order. Fails unless the input ends here.
void parse_tail_sections(Cursor& c, LitmusTest& test);

// `P<k>` with digits after the prefix; -1 if the label is not a thread label.
int parse_thread_label(const std::string& label);

// Post-parse normalization: implicit zero inits, implicit registers named by
// the final predicate, thread-id checks.
void normalize_test(LitmusTest& test);

std::string normalize_register(const std::string& reg);

}  // namespace lct::litmus::detail
