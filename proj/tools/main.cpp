#include <string>
#include <vector>

#include "openqs/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return openqs::cli_run(args);
}
