// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FCFNN_SRC_STREAMS_HPP_
#define FCFNN_SRC_STREAMS_HPP_

#include <cstdint>

// Stream tags for derive_seed. Changing a value changes every seeded result.
namespace fcfnn::streams {

inline constexpr std::uint64_t kSplit = 1;
inline constexpr std::uint64_t kBatches = 2;
inline constexpr std::uint64_t kDropout = 3;
inline constexpr std::uint64_t kArchetypes = 4;
inline constexpr std::uint64_t kRespondents = 5;
inline constexpr std::uint64_t kAugment = 6;

}  // namespace fcfnn::streams

#endif  // FCFNN_SRC_STREAMS_HPP_
