#include <iostream>
#include <string>
#include <vector>

#include "kgsol/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return kgsol::cli::run(args, std::cout, std::cerr);
}
