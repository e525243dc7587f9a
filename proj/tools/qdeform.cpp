#include <qdeform/cli.hpp>

#include <iostream>
#include <vector>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return qdeform::run_command(args, std::cout, std::cerr);
}
