#include <loopreg/cli.hpp>

int main(int argc, char** argv)
{
    return loopreg::cli::run(argc, argv);
}
