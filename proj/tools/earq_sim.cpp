#include "earq/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return earq::cli::main(argc, argv, std::cout, std::cerr); }
