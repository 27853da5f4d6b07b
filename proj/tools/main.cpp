#include <iostream>
#include <string>
#include <vector>

#include "multichan/cli.hpp"

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv + 1, argv + argc);
    const auto r = multichan::cli::run(args);
    std::cout << r.output;
    std::cerr << r.summary;
    return r.exit_status;
}
