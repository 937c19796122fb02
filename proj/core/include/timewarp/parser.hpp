#pragma once

#include <string_view>
#include <vector>

#include "timewarp/errors.hpp"
#include "timewarp/term.hpp"

namespace timewarp {

/// Parses a single term. Postfix `^o ^l ^r` are desugared into residuals.
Term parse_term(std::string_view text);

/// Parses `s <= t`, `s == t`, or a bare term t (read as `id <= t`).
Query parse_query(std::string_view text);

/// One query per non-blank line; `#` starts a comment. Error positions are
/// offsets into `text`.
std::vector<Query> parse_queries(std::string_view text);

}  // namespace timewarp
