#include <iostream>

#include "latalign/cli.h"

int main(int argc, char **argv) { return latalign::RunCli(argc, argv, std::cout, std::cerr); }
