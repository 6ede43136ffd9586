#include <string>
#include <vector>

#include "sympcap/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sympcap::cli::run(args);
}
