#include <iostream>

#include "caseledger/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return caseledger::cli::dispatch(args, std::cout, std::cerr);
}
