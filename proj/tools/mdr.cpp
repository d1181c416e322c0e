#include <iostream>

#include "mdr/cli/app.hpp"

int main(int argc, char** argv) { return mdr::cli::run_cli(argc, argv, std::cout, std::cerr); }
