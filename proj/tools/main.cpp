#include <iostream>
#include <string>
#include <vector>

#include "acceptance_suite.hpp"
#include "balanced/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return balanced::cli::dispatch(args, std::cout, std::cerr, acceptance::report);
}
