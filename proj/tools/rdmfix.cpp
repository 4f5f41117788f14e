#include <iostream>

#include "rdmfix/cli.hpp"

int main(int argc, char** argv) { return rdmfix::cli::run(argc, argv, std::cout, std::cerr); }
