#include "purify/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    return purify::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
