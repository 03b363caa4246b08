#include "mpq/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return mpq::cli::main(argc, argv, std::cout, std::cerr); }
