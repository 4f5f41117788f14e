#pragma once

#include <iosfwd>

namespace rdmfix::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kNotConverged = 2;  // validate: some condition violated

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rdmfix::cli
