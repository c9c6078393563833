#include "sgdkit/cli.hpp"

int main(int argc, char** argv) { return sgdkit::run_cli(argc, argv); }
