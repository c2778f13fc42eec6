#include "dampedmodes/cli.hpp"

int main(int argc, char** argv) { return dampedmodes::run_cli(argc, argv); }
