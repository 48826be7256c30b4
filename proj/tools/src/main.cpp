#include <iostream>

#include "cyclic_qsim_cli/cli.hpp"

int main(int argc, char** argv) { return cqsim::cli::run_cli(argc, argv, std::cout, std::cerr); }
