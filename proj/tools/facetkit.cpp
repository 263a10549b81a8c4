#include "facetkit/cli.hpp"

int main(int argc, char** argv) { return facetkit::cli::run(argc, argv); }
