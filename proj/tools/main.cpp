#include <iostream>

#include "autohom/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return autohom::run(args, std::cout, std::cerr);
}
