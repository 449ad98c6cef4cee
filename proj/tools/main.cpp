#include "swarmkin/cli.hpp"

int main(int argc, char** argv) { return swarmkin::cli::run_cli(argc, argv); }
