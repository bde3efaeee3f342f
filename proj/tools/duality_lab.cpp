#include "duality/cli.hpp"

int main(int argc, char** argv) { return duality::cli::run_cli(argc, argv); }
