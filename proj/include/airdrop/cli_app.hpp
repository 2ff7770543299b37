#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace airdrop::cli {

/// Full command dispatch; returns the process exit code (0 success,
/// 1 input/validation error, 2 solver failure).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

} // namespace airdrop::cli
