#include <iostream>

#include "app.hpp"

int main(int argc, char** argv) { return cvqt::cli::cli_main(argc, argv, std::cout, std::cerr); }
