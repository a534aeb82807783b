#include <iostream>
#include <string>
#include <vector>

#include "entperc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return entperc::run_cli(args, std::cout, std::cerr);
}
