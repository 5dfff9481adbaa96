#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ppfit::cli {

inline constexpr std::string_view kVersion = "1.0.0";

// Exit codes: 0 success, 2 usage/validation, 3 numerical failure,
// 4 file I/O.
int run(int argc, char** argv);
// args excludes the program name, e.g. {"fit", "--in", "a.csv"}.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace ppfit::cli
