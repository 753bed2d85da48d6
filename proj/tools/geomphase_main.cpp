#include "geomphase/cli.hpp"

int main(int argc, char** argv) {
    return geomphase::cli_main(argc, argv);
}
