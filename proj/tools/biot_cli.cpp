#include "biot/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return biot::run_cli({argv, argv + argc}, std::cout, std::cerr);
}
