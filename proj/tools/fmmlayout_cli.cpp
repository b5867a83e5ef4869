#include <fmmlayout/cli.hpp>

int main(int argc, char** argv)
{
    return fmmlayout::cli_main(std::vector<std::string>(argv, argv + argc));
}
