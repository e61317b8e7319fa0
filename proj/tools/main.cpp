#include "cli_app.hpp"

int main(int argc, char** argv) { return orbispec::cli::run(argc, argv); }
