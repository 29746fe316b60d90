#include <iostream>

#include "quasispec/cli.hpp"

int main(int argc, char** argv) { return quasispec::run_cli(argc, argv, std::cout, std::cerr); }
