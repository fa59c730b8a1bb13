#include <iostream>

#include "quantcap/cli_app.hpp"

int main(int argc, char** argv) {
  return quantcap::run_cli(argc, argv, std::cout, std::cerr);
}
