#include "relaxflow/cli.hpp"

int main(int argc, char** argv) { return relaxflow::cli_main(argc, argv); }
