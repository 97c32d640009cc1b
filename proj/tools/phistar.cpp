#include <iostream>
#include <string>
#include <vector>

#include "phistar/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return phistar::cli::dispatch(args, std::cout, std::cerr);
}
