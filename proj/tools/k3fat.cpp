#include <exception>
#include <iostream>

#include "k3fat/cli.hpp"

int main(int argc, char** argv) {
    try {
        return k3fat::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
