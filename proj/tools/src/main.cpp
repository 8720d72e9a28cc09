#include <iostream>

#include "groundseg/cli.hpp"

int main(int argc, char** argv) { return groundseg::cli::run(argc, argv, std::cout, std::cerr); }
