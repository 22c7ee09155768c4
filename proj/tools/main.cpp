#include "fuzzy/cli.hpp"

int main(int argc, char** argv) { return fuzzy::cli::run_cli(argc, argv); }
