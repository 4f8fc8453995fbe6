// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FCFNN_SRC_SCHEMA_JSON_HPP_
#define FCFNN_SRC_SCHEMA_JSON_HPP_

#include "fcfnn/schema.hpp"
#include <nlohmann/json.hpp>

namespace fcfnn::detail {

nlohmann::json schema_to_json(const SchemaSpec& schema);
SchemaSpec schema_from_json(const nlohmann::json& doc);

}  // namespace fcfnn::detail

#endif  // FCFNN_SRC_SCHEMA_JSON_HPP_
