#pragma once

#include <iosfwd>

namespace angof::cli {

/// Exit statuses: 0 success, 1 internal error, 2 domain, 3 numerical,
/// 4 degenerate data, 5 unsupported, 6 io, 7 config.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace angof::cli
