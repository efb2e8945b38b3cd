#include "sphereot/cli.hpp"

int main(int argc, char** argv) { return sphereot::cli::run(argc, argv); }
