#include "cli.hpp"

int main(int argc, char** argv) {
  return fparadox_cli::execute(std::vector<std::string>(argv + 1, argv + argc));
}
