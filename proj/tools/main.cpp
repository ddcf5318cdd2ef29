#include <iostream>

#include "sclrom/cli.hpp"

int main(int argc, char** argv) { return sclrom::run_cli(argc, argv, std::cout, std::cerr); }
