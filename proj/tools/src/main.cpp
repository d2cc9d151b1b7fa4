#include <iostream>
#include <string>
#include <vector>

#include "pepa_cli/run_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pepa_cli::run_cli(args, std::cout, std::cerr);
}
