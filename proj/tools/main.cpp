#include "cflow/cli.hpp"

int main(int argc, char** argv) { return cflow::run_cli(argc, argv); }
