#include <iostream>

#include "scatterfield/cli.hpp"

int main(int argc, char** argv) {
  return scatterfield::cli::run(argc, argv, std::cout, std::cerr);
}
