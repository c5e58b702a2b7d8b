// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "cbir/cli.hpp"

int main(int argc, char** argv) { return cbir::cli::run(argc, argv, std::cout, std::cerr); }
