// Copyright 2026 The uavex Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

int main(int argc, char** argv) { return uavex::cli::cli_main(argc, argv); }
