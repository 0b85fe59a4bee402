#include "cli.hpp"

int main(int argc, char** argv) { return tetherplan::cli::run(argc, argv); }
