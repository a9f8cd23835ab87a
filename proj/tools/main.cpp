#include <iostream>

#include "gch2/cli.hpp"

int main(int argc, char** argv) { return gch2::parse_and_dispatch(argc, argv, std::cout, std::cerr); }
