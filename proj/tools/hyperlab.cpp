#include "hyperlab/runner.hpp"

#include <iostream>

int main(int argc, char** argv) { return hyperlab::run_command(argc, argv, std::cout, std::cerr); }
