#include "pater/cli.hpp"

int main(int argc, char** argv) { return pater::run_cli(argc, argv); }
