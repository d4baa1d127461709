#pragma once

#include <ostream>

namespace qsa {

/// Full command-line entry point, stream-parameterized for tests.
/// Exit codes: 0 success, 1 I/O or schema problems, 2 domain errors
/// (reported as {"error": code, "detail": ...}).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qsa
