#include "asmp/cli.hpp"

int main(int argc, char** argv) { return asmp::cli_main(argc, argv); }
