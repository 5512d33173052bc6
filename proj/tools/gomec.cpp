#include "gomec/cli.hpp"

#include <iostream>

int
main(int argc, char** argv)
{
    return gomec::cli::Main(argc, argv, std::cout, std::cerr);
}
