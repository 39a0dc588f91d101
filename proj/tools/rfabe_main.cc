#include <iostream>

#include "rfabe/cli.h"

int main(int argc, char** argv) { return rfabe::run_cli(argc, argv, std::cout, std::cerr); }
