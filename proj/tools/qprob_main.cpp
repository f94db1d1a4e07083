#include "qprob/cli.hpp"

int main(int argc, char** argv) { return qprob::cli::dispatch(argc, argv); }
