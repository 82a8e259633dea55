#include "bondsim/cli/app.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return bondsim::cli::main_entry(argc, argv, std::cout, std::cerr);
}
