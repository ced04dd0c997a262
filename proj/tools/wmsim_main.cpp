#include "wmsn/cli.hpp"

int main(int argc, char** argv)
{
    return wmsn::run_cli(argc, argv);
}
