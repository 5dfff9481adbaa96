#include "ppfit/cli.hpp"

int main(int argc, char** argv) { return ppfit::cli::run(argc, argv); }
