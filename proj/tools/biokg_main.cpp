#include <iostream>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "biokg/cli.hpp"

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("biokg"));
  spdlog::set_pattern("[%l] %v");
  std::vector<std::string> args(argv + 1, argv + argc);
  return biokg::cli::run(args, std::cout, std::cerr);
}
