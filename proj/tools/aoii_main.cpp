#include "aoii/cli.hpp"

int main(int argc, char **argv) {
    return aoii::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
