#include <iostream>
#include <string>
#include <vector>

#include "biwb/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return biwb::run_command(std::move(args), std::cout).exit_code;
}
