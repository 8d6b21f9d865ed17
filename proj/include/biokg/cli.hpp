#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace biokg::cli {

// Exit codes: 0 success, 1 usage or validation error, 2 I/O error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

// Environment variable naming the default --graph directory.
inline constexpr const char* kGraphEnv = "BIOKG_GRAPH";

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace biokg::cli
