#include "mlab/cli.hpp"

int main(int argc, char** argv) { return mlab::cli_main(argc, argv); }
