#include <iostream>
#include <string>
#include <vector>

#include "levydev/cli.hpp"

int main(int argc, char** argv) {
  return levydev::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
