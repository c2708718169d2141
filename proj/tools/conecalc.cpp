#include <iostream>

#include "conecalc/cli.hpp"

int main(int argc, char** argv) { return conecalc::cli::run(argc, argv, std::cout, std::cerr); }
