#include <iostream>

#include "alm_cli/app.hpp"

int main(int argc, char **argv) {
    return alm::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
