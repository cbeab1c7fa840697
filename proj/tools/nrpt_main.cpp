#include <string>
#include <vector>

#include "nrpt/cli.hpp"

int main(int argc, char** argv) {
  return nrpt::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
