#pragma once

#include <iosfwd>

namespace markov::cli {

/// Exit codes shared by all subcommands.
enum Exit : int { kPass = 0, kError = 1, kNegative = 2, kUndecided = 3 };

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace markov::cli
