#include <iostream>

#include "eqsep/cli.hpp"

int main(int argc, char **argv)
{ return eqsep::cli::run(argc, argv, std::cout, std::cerr); }
