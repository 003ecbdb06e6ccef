#pragma once

#include <iosfwd>
#include <string>

#include "fkfp/cli/config.hpp"

namespace fkfp::cli {

// Executes one subcommand (kernel | solve | norms | verify | all) under the
// config's output root. Returns 0 when every enabled check passed, 1 otherwise.
int dispatch(const RunConfig& cfg, const std::string& subcommand, std::ostream& log);

// Runs the reproducibility pack: the same small kernel/solve/verify outputs
// written three times (threads 1, 1, 2) and compared byte for byte (the
// timestamped manifest is excluded). True when all files match.
bool reproducibility_check(const RunConfig& base, const std::string& out_root, std::ostream& log,
                           std::string* detail);

}  // namespace fkfp::cli
