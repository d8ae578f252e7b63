#include "qgol/cli.hpp"

int main(int argc, char** argv) { return qgol::run_cli({argv, argv + argc}); }
