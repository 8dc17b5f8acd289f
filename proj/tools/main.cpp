#include <iostream>

#include "erosion/cli.hpp"

int main(int argc, char** argv) {
    return erosion::cli::run(argc, argv, std::cout, std::cerr);
}
