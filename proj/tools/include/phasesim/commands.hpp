#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace phasesim {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvariant = 1,
  kExitValidation = 2,
  kExitIo = 3,
  kExitInstability = 4,
};

/// Runs one phasesim invocation; args excludes the program name. Reports go to out,
/// diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// snap_<index>_t=<time>.psf with the index zero-padded to six digits.
std::string snapshot_name(int index, double t);

}  // namespace phasesim
