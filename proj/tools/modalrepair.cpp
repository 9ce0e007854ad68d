#include "modalrepair/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return modalrepair::run_cli(argc, argv, std::cout, std::cerr); }
