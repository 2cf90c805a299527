#pragma once

#include <string_view>

#include "convbrowse/dialogue.hpp"
#include "convbrowse/errors.hpp"

namespace convbrowse {

/// Raised when a typed line matches neither a keyword nor an offer.
class UnrecognizedInputError : public Error {
 public:
  using Error::Error;
};

/// Maps a typed line to an action against the latest message:
///   "skip" / "more" / "restart"      -> that kind
///   "not <token>"                    -> prune offers whose value contains token
///   "2" or "1,3" or "1 3"            -> select the numbered offers
///   anything else                    -> select offers containing the text
///                                       (or, failing that, any of its words)
/// Matching is case-insensitive.
Action parse_user_input(std::string_view text, const Message& latest);

}  // namespace convbrowse
