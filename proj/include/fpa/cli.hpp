#pragma once

#include <ostream>

namespace fpa::cli {

/// Runs the command line front-end. Returns 0 on success, 1 when an input
/// or result fails validation, 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fpa::cli
