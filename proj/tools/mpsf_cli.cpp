#include "mpsf/cli.hpp"

int main(int argc, char** argv) { return mpsf::cli::run(argc, argv); }
