#include "qphase/cli.hpp"

int main(int argc, char** argv) { return qphase::cli::run(argc, argv); }
