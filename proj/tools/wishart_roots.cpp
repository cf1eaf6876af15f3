#include "cli_app.hpp"

int main(int argc, char** argv) { return wishart::cli::run(argc, argv); }
