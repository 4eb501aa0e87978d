#include "cli.hpp"

int main(int argc, char** argv) { return liftscale::cli::run(argc, argv); }
