#include <iostream>

#include "bic1d/cli.hpp"

int main(int argc, char** argv) { return bic1d::cli::run(argc, argv, std::cout, std::cerr); }
