#include <iostream>
#include <string>
#include <vector>

#include "fliplab/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return fliplab::cli_dispatch(args, std::cout, std::cerr);
}
