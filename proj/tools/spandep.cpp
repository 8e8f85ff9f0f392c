#include <iostream>
#include <string>
#include <vector>

#include "spandep/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return spandep::run_cli(args, std::cout, std::cerr);
}
