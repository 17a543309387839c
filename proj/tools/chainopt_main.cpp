#include <string>
#include <vector>

#include "chainopt/harness.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return chainopt::dispatch(args);
}
