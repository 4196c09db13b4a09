#include <string>
#include <vector>

#include "qmclab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return qmclab::cli::run(args);
}
