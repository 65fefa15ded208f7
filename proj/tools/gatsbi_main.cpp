#include <string>
#include <vector>

#include "gatsbi/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return gatsbi::cli::dispatch(args);
}
