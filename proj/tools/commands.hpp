#pragma once

#include <iosfwd>

namespace icp::cli {

// Exit codes of the icp tool.
enum Exit : int {
  kOk = 0,
  kInvalidInput = 1,    // unreadable or invalid complex, malformed CSV, bad flags
  kStarViolated = 2,    // a face fails the angle-sum condition
  kStepUnderflow = 3,   // the integrator could not take a step
  kBudgetExhausted = 4  // max-steps reached before convergence
};

// Runs one command line (argv[0] is the program name). Normal output goes to
// `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace icp::cli
