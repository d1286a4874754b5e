#include <iostream>

#include "dts/cli.hpp"

int main(int argc, char** argv) {
    return dts::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
