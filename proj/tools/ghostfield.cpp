#include "ghostfield/harness.hpp"

int main(int argc, char** argv) {
    return ghostfield::run_command(
        std::vector<std::string>(argv, argv + argc));
}
