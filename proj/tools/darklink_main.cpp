#include <iostream>
#include <string>
#include <vector>

#include "darklink/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return darklink::run_cli(args, std::cout, std::cerr);
}
