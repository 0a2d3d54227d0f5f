#include <iostream>
#include <string>
#include <vector>

#include "scm/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return scm::run_cli(args, std::cout, std::cerr);
}
