#include <iostream>

#include "qlpoly/cli.hpp"

int main(int argc, char** argv) { return qlpoly::run(argc, argv, std::cout, std::cerr); }
