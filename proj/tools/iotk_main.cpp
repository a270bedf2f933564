#include <iostream>
#include <string>
#include <vector>

#include "iotk/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return static_cast<int>(iotk::run_cli(args, std::cout, std::cerr));
}
