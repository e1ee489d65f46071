#include <iostream>
#include <string>
#include <vector>

#include "ptoric/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return ptoric::cli::run(args, std::cout, std::cerr);
}
