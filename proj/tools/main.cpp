#include "lab/lab.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return sweepout::lab::run(argc, argv, std::cout, std::cerr);
}
