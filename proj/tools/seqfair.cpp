#include <iostream>
#include <string>
#include <vector>

#include "seqfair/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return seqfair::cli::run(args, std::cout, std::cerr);
}
