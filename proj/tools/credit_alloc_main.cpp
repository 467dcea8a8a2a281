#include <iostream>
#include <string>
#include <vector>

#include <credit_alloc/cli.hpp>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return credit_alloc::cli::run(args, std::cout, std::cerr);
}
