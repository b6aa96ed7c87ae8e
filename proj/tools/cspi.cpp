#include <iostream>
#include <string>
#include <vector>

#include "cspi/cli/app.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return cspi::cli::run_cli(args, std::cout, std::cerr);
}
