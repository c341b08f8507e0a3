#include "cli.hpp"

int main(int argc, char** argv)
{
    return chxpso::cli::run_cli(argc, argv);
}
