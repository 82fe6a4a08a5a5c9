#pragma once

#include <string>
#include <vector>

namespace hawkeslob::cli {

/// Dispatches one subcommand. Exit status: 0 success, 1 validation failure,
/// 2 numerical failure, 3 acceptance-threshold failure (verify-*).
int run(const std::vector<std::string>& args);

}  // namespace hawkeslob::cli
