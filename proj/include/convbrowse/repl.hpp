#pragma once

#include <iosfwd>

#include "convbrowse/engine.hpp"
#include "convbrowse/search.hpp"

namespace convbrowse {

/// Terminal chat over one session. Reads lines from `in` until the session
/// finishes, `:quit` or end of input. Besides the inputs understood by
/// parse_user_input it accepts `:restart`, `:overview` and `:search <q>`.
/// Returns the process exit code.
int run_repl(const DialogueEngine& engine, const SearchIndex& search, std::istream& in,
             std::ostream& out);

}  // namespace convbrowse
