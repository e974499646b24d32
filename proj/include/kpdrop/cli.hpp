#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace kpdrop::cli {

// Runs one subcommand (partition, augment, format-targets, score,
// split-semi, label-synthetic). `args` excludes the program name.
// Returns 0 on success, 1 on a runtime error or skipped input lines, 2 on
// a usage error.
int run_pipeline(std::span<const std::string> args, std::ostream& out, std::ostream& err);

} // namespace kpdrop::cli
