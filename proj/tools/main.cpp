#include "cli.hpp"

int main(int argc, char** argv)
{
    return dpg::cli::main_entry(argc, argv);
}
