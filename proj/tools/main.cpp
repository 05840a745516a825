#include <string>
#include <vector>

#include "bssk/cli.hpp"

int main(int argc, char** argv) { return bssk::cli::run(std::vector<std::string>(argv + 1, argv + argc)); }
