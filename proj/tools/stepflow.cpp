#include "commands.hpp"

int main(int argc, char** argv) { return stepflow::cli::run(argc, argv); }
