#include "bst/cli.hpp"

int main(int argc, char** argv) { return bst::cli::run(argc, argv); }
