#include "fixsim/cli.hpp"

int main(int argc, char** argv) { return fixsim::run_cli(argc, argv); }
