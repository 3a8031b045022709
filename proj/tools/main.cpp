#include <string>
#include <vector>

#include "ucblab/cli.hpp"

int main(int argc, char** argv) {
  return ucblab::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
