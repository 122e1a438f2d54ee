#include "cli.hpp"

int main(int argc, char** argv) { return conformist::cli::run_cli(argc, argv); }
