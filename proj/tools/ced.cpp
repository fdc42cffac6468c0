#include <iostream>
#include <string>
#include <vector>

#include "ced/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return ced::cli::run(args, std::cout, std::cerr);
}
