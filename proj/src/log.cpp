// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "fcfnn/log.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace fcfnn {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

WarningSink& sink_slot() {
  static WarningSink sink;
  return sink;
}

}  // namespace

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex());
  if (sink_slot()) {
    sink_slot()(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard lock(sink_mutex());
  return std::exchange(sink_slot(), std::move(sink));
}

}  // namespace fcfnn
