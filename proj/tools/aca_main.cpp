#include "aca/cli.hpp"

int main(int argc, char** argv) { return aca::cli::run(argc, argv); }
