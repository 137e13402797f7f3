#include "sheath/driver.hpp"

#include <iostream>

int main(int argc, char** argv) { return sheath::main_cli(argc, argv, std::cout, std::cerr); }
