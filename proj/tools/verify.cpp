#include <sdra/cli.hpp>

int main(int argc, char** argv) { return sdra::run(argc, argv); }
