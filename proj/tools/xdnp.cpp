#include "xdnp/cli.hpp"

int main(int argc, char** argv) { return xdnp::run_cli(argc, argv); }
