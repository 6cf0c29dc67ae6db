#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return icp::cli::run(argc, argv, std::cout, std::cerr); }
