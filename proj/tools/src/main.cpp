#include "solab/cli/commands.hpp"

int main(int argc, char** argv) { return solab::cli::run(argc, argv); }
