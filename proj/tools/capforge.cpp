#include "capforge/cli.hpp"

int main(int argc, char** argv) { return capforge::cli::run(argc, argv); }
