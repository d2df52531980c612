#include <string>
#include <vector>

#include "depth_hjb/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return depth_hjb::run(args);
}
