#include <iostream>

#include "gaussnc/commands.hpp"

int main(int argc, char** argv) {
  return gaussnc::cli::main_entry(argc, argv, std::cout, std::cerr);
}
