#include <iostream>

#include "qfall/cli/app.hpp"

int main(int argc, char** argv) { return qfall::cli::run_cli(argc, argv, std::cout, std::cerr); }
