#pragma once

namespace qprob::cli {

/// Entry point behind main(): parses argv, routes to the subcommand, and
/// returns the process exit code (0 success, 1 assertion/check failure,
/// 2 usage error).
int dispatch(int argc, const char* const* argv);

}  // namespace qprob::cli
