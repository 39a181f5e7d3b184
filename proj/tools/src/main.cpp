#include "bbench/commands.hpp"

int main(int argc, char** argv) { return bbench::cli_main(argc, argv); }
