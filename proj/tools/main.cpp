#include "cli.hpp"

int main(int argc, char **argv) {
    return safeplan::cli::run(argc, argv);
}
