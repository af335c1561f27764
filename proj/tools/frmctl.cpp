#include <iostream>

#include "frm/gateway/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return frm::gateway::run_cli(args, std::cout, std::cerr);
}
