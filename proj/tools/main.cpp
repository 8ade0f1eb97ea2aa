#include <iostream>

#include "phasesim/commands.hpp"

int main(int argc, char** argv) {
  return phasesim::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
