#include "cli_app.hpp"

int main(int argc, char** argv) { return tardy::cli::run(argc, argv); }
