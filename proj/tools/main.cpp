#include "qcsched/cli.hpp"

int main(int argc, char** argv) { return qcsched::cli_main(argc, argv); }
