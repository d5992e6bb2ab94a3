#include "cli.hpp"

int main(int argc, char** argv) { return pigp::cli::main_entry(argc, argv); }
