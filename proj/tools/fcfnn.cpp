// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "fcfnn/cli.hpp"

int main(int argc, char** argv) { return fcfnn::cli::run(argc, argv); }
