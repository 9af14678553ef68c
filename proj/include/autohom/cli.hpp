#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace autohom {

// Exit codes of the command line front-end.
inline constexpr int kExitPositive = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitUnknown = 2;
inline constexpr int kExitInputError = 3;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace autohom
