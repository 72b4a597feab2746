#include <iostream>

#include "rsstoa/cli.hpp"

int main(int argc, char** argv) { return rsstoa::cli::run(argc, argv, std::cout, std::cerr); }
