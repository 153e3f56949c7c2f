#include <iostream>

#include "sympmarg/cli.hpp"

int main(int argc, char** argv) {
  return sympmarg::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
