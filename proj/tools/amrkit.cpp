#include <iostream>

#include "amrkit/cli.hpp"

int main(int argc, char** argv) { return amrkit::cli_dispatch(argc, argv, std::cout, std::cerr); }
