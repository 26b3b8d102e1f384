#include "bioclust/cli.hpp"

int main(int argc, char** argv) { return bioclust::cli::run(argc, argv); }
