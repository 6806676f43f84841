#include "varcert_cli/cli.hpp"

int main(int argc, char** argv) { return varcert::cli::run(argc, argv); }
