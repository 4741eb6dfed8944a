#include "c3bf/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return c3bf::cli::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
