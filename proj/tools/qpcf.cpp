#include <iostream>

#include "qpcf/cli.hpp"

int main(int argc, char** argv) { return qpcf::cli::run(argc, argv, std::cout, std::cerr); }
