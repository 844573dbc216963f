#include <iostream>

#include "kserver/cli.hpp"

int main(int argc, char** argv) { return kserver::run_cli(argc, argv, std::cout, std::cerr); }
