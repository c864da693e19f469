#include <iostream>

#include "duokey/cli.hpp"

int main(int argc, char** argv) {
  return duokey::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
