#pragma once

namespace qlink::cli {

/// Full command-line entry point: parses arguments, runs the requested
/// experiment, writes CSV/JSON to --out or stdout. Returns the process exit
/// code: 0 success, 2 configuration/usage error, 3 numerical or truncation
/// failure, 4 violated physical invariant.
int run_app(int argc, const char* const* argv);

} // namespace qlink::cli
