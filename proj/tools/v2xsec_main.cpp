#include <vector>

#include "v2xsec/cli_app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return v2xsec::run_command(args);
}
