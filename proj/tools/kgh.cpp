#include <iostream>
#include <string>
#include <vector>

#include "kgh/cli/run.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return kgh::cli::run_main(args, std::cout, std::cerr);
}
