#ifndef UPOBLAB_CLI_H
#define UPOBLAB_CLI_H

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "upoblab/product_basis.h"

namespace upoblab {

enum ExitCode : int {
    kExitOk = 0,
    kExitNegative = 1,
    kExitUsage = 2,
    kExitInconclusive = 3,
};

/// Catalog identifiers: u2, nqubit:N, qutrit-uuo, weyl:D, lift:Q, example2,
/// example1-upb (as column factors), example1-upob. `base` names the lift
/// base and defaults to qutrit-uuo. Throws ConfigError for unknown names.
OperatorSet construct_by_name(const std::string& name, const std::optional<std::string>& base = {});

/// Applies UPOBLAB_LOG (error, info or debug) to the global logger.
void configure_logging_from_env();

/// Runs one command line (args exclude the program name) and returns the
/// exit code. Reports go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace upoblab

#endif
