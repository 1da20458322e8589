#include <iostream>

#include "ipdmem/io.hpp"

int main(int argc, char** argv) { return ipdmem::cli_main(argc, argv, std::cout, std::cerr); }
