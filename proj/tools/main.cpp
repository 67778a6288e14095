#include <iostream>

#include "cli/app.hpp"
#include "cli/config.hpp"

int main(int argc, char** argv) {
  return polariton::cli::run(argc, argv, std::cout, std::cerr,
                             polariton::cli::process_environment());
}
