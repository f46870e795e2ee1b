#include <string>
#include <vector>

#include "pufgcc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return pufgcc::cli::run(args);
}
