#include <iostream>
#include <string>
#include <vector>

#include "borelforge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return borelforge::run(args, std::cout, std::cerr);
}
