#include <iostream>
#include <string>
#include <vector>

#include "sce/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sce::run_cli(args, std::cout, std::cerr);
}
