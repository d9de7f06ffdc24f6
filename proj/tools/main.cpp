#include "unextend/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return unextend::run_cli(argc, argv, std::cout, std::cerr);
}
