#pragma once

#include <iosfwd>

namespace hddcor::cli {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

// Entry point of the hddcor command line. Writes results to `out` unless
// --out names a file, diagnostics to `err`; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hddcor::cli
