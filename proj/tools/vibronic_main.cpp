#include <iostream>

#include "vibronic/cli.hpp"

int main(int argc, char** argv) {
  return vibronic::cli::dispatch(argc, argv, std::cout, std::cerr);
}
