#include <iostream>

#include "mirror/cli.hpp"

int main(int argc, char** argv) { return mirror::cli_main(argc, argv, std::cout, std::cerr); }
