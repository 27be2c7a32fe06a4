#include <iostream>

#include "obslab/lab/cli.hpp"

int main(int argc, char** argv) { return obslab::lab::cli_main(argc, argv, std::cout, std::cerr); }
