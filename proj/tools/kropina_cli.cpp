#include <iostream>
#include <string>
#include <vector>

#include "kropina/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return kropina::cli::run(args, std::cout, std::cerr);
}
