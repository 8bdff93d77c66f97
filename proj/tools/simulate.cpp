#include "cli/runners.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return lk::cli::run_main(args);
}
