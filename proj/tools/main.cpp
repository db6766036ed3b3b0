#include <iostream>
#include <string>
#include <vector>

#include "capsym/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return capsym::run_command(args, std::cout, std::cerr);
}
