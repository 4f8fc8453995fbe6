// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FCFNN_LOG_HPP_
#define FCFNN_LOG_HPP_

#include <functional>
#include <string_view>

namespace fcfnn {

using WarningSink = std::function<void(std::string_view)>;

/// Reports a non-fatal condition (ignored CSV columns, out-of-range inference
/// features). Goes to stderr unless a sink is installed.
void warn(std::string_view message);

/// Installs `sink` and returns the previous one. An empty sink restores the
/// stderr default.
WarningSink set_warning_sink(WarningSink sink);

}  // namespace fcfnn

#endif  // FCFNN_LOG_HPP_
