#include <iostream>
#include <string>
#include <vector>

#include "statedge_cli.hpp"

int main(int argc, char** argv) {
  return statedge::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
