#include <iostream>
#include <string>
#include <vector>

#include "dpbinom/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return dpbinom::cli::run(args, std::cout, std::cerr);
}
