#include "rlab/cli/commands.hpp"

int main(int argc, char** argv) { return rlab::cli::run({argv + 1, argv + argc}); }
