// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#include "kgtrick/cli.hpp"

int main(int argc, char** argv) { return kgtrick::cli::run(argc, argv); }
