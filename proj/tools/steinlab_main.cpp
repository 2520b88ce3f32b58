#include "steinlab/runner.hpp"

int main(int argc, char** argv) { return steinlab::run_cli(argc, argv); }
