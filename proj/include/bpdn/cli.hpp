// Command-line front end: gen, verify, solve, bench, plot.

#ifndef BPDN_CLI_HPP
#define BPDN_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace bpdn::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,       // bad flags, unknown experiment
  kInfeasible = 2,  // no certificate for the requested sign pattern
  kParse = 3,       // unreadable or malformed input file
  kResidual = 4,    // optimality residual violation or tampered file
  kMaxIter = 5,     // solver stopped without reaching the tolerance
};

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bpdn::cli

#endif  // BPDN_CLI_HPP
