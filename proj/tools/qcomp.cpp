#include <iostream>

#include "qcomp/cli.hpp"

int main(int argc, char** argv) {
  return qcomp::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
