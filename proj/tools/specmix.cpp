#include <iostream>

#include "specmix/cli_main.hpp"

int main(int argc, char** argv) { return specmix::cli_main(argc, argv, std::cout, std::cerr); }
