#include "lrdfield/cli.hpp"

int main(int argc, char** argv) { return lrdfield::run_cli(argc, argv); }
