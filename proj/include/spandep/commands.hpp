#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spandep {

// Full command-line interface on argv-style arguments (program name
// excluded). Verbs: train, parse, eval, baseline, oracle-check, bench.
// Returns the process exit code: 0 success, 1 validation/usage error,
// 2 internal invariant violation.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spandep
