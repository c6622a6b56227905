#include <iostream>

#include "liftlim/cli.hpp"

int main(int argc, char** argv) { return liftlim::cli_main(argc, argv, std::cout, std::cerr); }
