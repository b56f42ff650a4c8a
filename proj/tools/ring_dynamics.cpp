#include "ring/cli.hpp"

int main(int argc, char** argv) { return ring::cli::run(argc, argv); }
