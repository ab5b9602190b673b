#include "pssa/cli.hpp"

int main(int argc, char** argv) {
  return pssa::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
