#include <iostream>

#include "relconj/cli.hpp"

int main(int argc, char** argv) {
  return relconj::cli::dispatch(argc, argv, std::cout, std::cerr);
}
