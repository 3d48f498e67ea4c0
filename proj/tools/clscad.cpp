#include <iostream>

#include "clscad/cli.hpp"

int main(int argc, char** argv) { return clscad::run_cli(argc, argv, std::cout, std::cerr); }
