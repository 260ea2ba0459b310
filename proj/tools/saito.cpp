#include "saito/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return saito::run_cli(argc, argv, std::cout, std::cerr); }
