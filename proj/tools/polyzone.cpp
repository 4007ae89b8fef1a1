#include "polyzone/cli.hpp"

int main(int argc, char** argv) { return polyzone::cli::run(argc, argv); }
