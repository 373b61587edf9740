#include <iostream>

#include "dirac_thermo/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dirac_thermo::cli::run(args, std::cout, std::cerr);
}
