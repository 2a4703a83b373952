#include "cli.hpp"

int main(int argc, char** argv) { return mmtk::cli::main(argc, argv); }
