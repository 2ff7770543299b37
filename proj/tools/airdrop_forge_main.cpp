#include "airdrop/cli_app.hpp"

int main(int argc, char** argv) { return airdrop::cli::run(argc, argv); }
