// SPDX-License-Identifier: Apache-2.0
#include "common.hpp"

int main(int argc, char** argv) { return semstyle::cli::run(argc, argv); }
