#pragma once

#include <ostream>

namespace mirror {

/// Entry point of the mirrorlab tool. Reports go to `out` as JSON, logs and
/// usage text to `err`. Exit codes: 0 success, 1 failed assertion (a check
/// came back false, a budget was exceeded), 2 usage error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mirror
