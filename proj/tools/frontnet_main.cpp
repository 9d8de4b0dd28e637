#include "frontnet/cli/run.hpp"

int main(int argc, char** argv) { return frontnet::cli::run_main(argc, argv); }
