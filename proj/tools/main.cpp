#include "bqsearch/cli.hpp"

int main(int argc, char** argv) { return bqsearch::run_cli(argc, argv); }
