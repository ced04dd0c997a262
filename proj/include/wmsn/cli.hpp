#pragma once

namespace wmsn {

// Full command-line entry point (run | compare | topo | analyze).
// Returns the process exit code: 0 success, 2 validation error, 3 runtime
// error.
int run_cli(int argc, const char* const* argv);

} // namespace wmsn
