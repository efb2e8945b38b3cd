#pragma once

#include <string>
#include <vector>

namespace sphereot::cli {

// Exit codes: 0 success, 1 numeric failure, 2 validation error.
int run(int argc, char** argv);
int run(std::vector<std::string> args);  // args[0] is the program name

}  // namespace sphereot::cli
