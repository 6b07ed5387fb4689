#include <iostream>

#include "probcert/cli.hpp"

int main(int argc, char** argv) {
    return probcert::run_cli(argc, argv, std::cout, std::cerr);
}
