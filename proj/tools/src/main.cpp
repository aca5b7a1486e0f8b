#include <iostream>
#include <string>
#include <vector>

#include "ambiq_cli/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  std::vector<std::string> args(argv, argv + argc);
  return ambiq::cli::run(args, std::cout, std::cerr);
}
