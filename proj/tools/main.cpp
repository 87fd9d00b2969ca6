// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return cs::run_cli(argc, argv, std::cout, std::cerr); }
