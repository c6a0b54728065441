#include "fpa/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return fpa::cli::run(argc, argv, std::cout, std::cerr); }
