#include "gridloc/cli/app.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return gridloc::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
