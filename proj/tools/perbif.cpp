#include "perbif/cli.hpp"

int main(int argc, char** argv) { return perbif::cli::main(argc, argv); }
