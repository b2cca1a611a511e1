#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zerosum::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kError = 1,      // usage errors, budget errors, I/O failures
  kRefuted = 2,    // verify: well-formed certificate whose claim is false
  kMalformed = 3,  // verify: certificate fails schema checks
  kSearchFailed = 4,  // witness: no trial produced a free sequence
};

/// Fixed column order of `sweep` CSV output.
inline constexpr const char* kSweepHeader = "n,q,Q,A_finite,gap_to_asymptotic,prior_base";

/// Runs one command line (args[0] is the program name). All normal output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zerosum::cli
