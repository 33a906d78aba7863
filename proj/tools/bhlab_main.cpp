#include <iostream>

#include "bhlab/cli.hpp"

int main(int argc, char** argv) { return bhlab::run_cli(argc, argv, std::cout, std::cerr); }
