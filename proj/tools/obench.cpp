#include "obench/cli.hpp"

int main(int argc, char** argv) { return obench::cli_dispatch(argc, argv); }
