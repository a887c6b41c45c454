#include <iostream>

#include "vstream/cli.hpp"

int main(int argc, char** argv)
{
    return vstream::run_cli(argc, argv, std::cout, std::cerr);
}
