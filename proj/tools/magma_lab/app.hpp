#ifndef MAGMA_LAB_APP_HPP
#define MAGMA_LAB_APP_HPP

#include <iosfwd>

namespace magma::lab {

/// Parses argv, runs one subcommand and returns the process exit code:
/// 0 success, 1 configuration error, 2 numerical failure, 3 I/O error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace magma::lab

#endif  // MAGMA_LAB_APP_HPP
