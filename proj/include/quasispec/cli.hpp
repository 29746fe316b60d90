#pragma once

#include <ostream>

namespace quasispec {

/// Runs the quasispec command line. Results go to --output or `out`,
/// diagnostics to `err`. Returns 0 on success, 1 for usage or input errors,
/// 2 for numerical failures.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace quasispec
