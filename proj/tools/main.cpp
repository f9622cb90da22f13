#include <iostream>
#include <string>
#include <vector>

#include "conefp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return conefp::run_cli(args, std::cout, std::cerr);
}
