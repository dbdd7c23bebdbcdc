#include <iostream>

#include "netcca/cli.hpp"

int main(int argc, char** argv) { return netcca::runCli(argc, argv, std::cout, std::cerr); }
