#include <iostream>

#include "smactl/app.hpp"

int main(int argc, char** argv) { return smactl::run(argc, argv, std::cout, std::cerr); }
