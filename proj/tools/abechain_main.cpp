#include "abechain/cli.hpp"

int main(int argc, char** argv) { return abechain::run_cli(argc, argv); }
