#include "cli.hpp"

int main(int argc, char** argv) { return pnlayer::cli::main_entry(argc, argv); }
