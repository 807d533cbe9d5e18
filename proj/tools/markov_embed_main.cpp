#include <iostream>

#include "markov_embed/cli.hpp"

int main(int argc, char** argv) { return markov::cli::run(argc, argv, std::cout, std::cerr); }
