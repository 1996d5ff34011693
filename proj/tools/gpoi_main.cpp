#include <string>
#include <vector>

#include "gpoi/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return gpoi::cli::run(args);
}
