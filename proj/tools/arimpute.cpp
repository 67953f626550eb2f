#include <string>
#include <vector>

#include "arimpute/cli.hpp"

int main(int argc, char** argv) {
  return arimpute::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
