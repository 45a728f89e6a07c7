#include "cli/commands.hpp"

int main(int argc, char** argv) { return vqnac::cli::cli_main(argc, argv); }
