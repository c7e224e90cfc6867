#include "bvtk/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return bvtk::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
