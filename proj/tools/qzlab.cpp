#include "qz/cli.hpp"

int main(int argc, char** argv) { return qz::cli::run_cli(argc, argv); }
