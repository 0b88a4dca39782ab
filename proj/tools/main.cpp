#include <iostream>

#include "tachys/cli.hpp"

int main(int argc, char** argv) { return tachys::cli::run(argc, argv, std::cout, std::cerr); }
