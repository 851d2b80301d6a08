#include "pgm/cli.hpp"

int main(int argc, char** argv)
{
    return pgm::cli::run(argc, argv);
}
