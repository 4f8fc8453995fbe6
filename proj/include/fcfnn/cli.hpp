// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FCFNN_CLI_HPP_
#define FCFNN_CLI_HPP_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fcfnn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

/// Environment variable naming the schema file used when --schema is absent.
inline constexpr std::string_view kSchemaEnv = "FCFNN_SCHEMA";

/// Runs one subcommand (generate, train, evaluate, predict, inspect).
/// `args` excludes the program name. Failures print one line on `err`:
///   error kind=<usage|config|data|model|io|dimension|numeric> message="..."
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace fcfnn::cli

#endif  // FCFNN_CLI_HPP_
