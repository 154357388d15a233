#include <iostream>

#include "qradial/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qradial::cli::run(args, std::cout, std::cerr);
}
