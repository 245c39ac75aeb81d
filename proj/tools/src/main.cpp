#include "argus/tools/cli.hpp"

int main(int argc, char** argv) { return argus::tools::run_cli(argc, argv); }
