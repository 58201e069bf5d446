#include <string>
#include <vector>

#include "randbeta/cli.hpp"

int main(int argc, char** argv) {
    return randbeta::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
