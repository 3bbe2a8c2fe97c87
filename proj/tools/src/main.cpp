#include <iostream>

#include "wgdc_tools/cli.hpp"

int main(int argc, char** argv) { return wgdc::cli::run(argc, argv, std::cout, std::cerr); }
