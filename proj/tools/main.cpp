#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return parq::cli::run_cli(argc, argv, std::cout, std::cerr);
}
