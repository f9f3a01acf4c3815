/* Copyright 2026 The ptladder Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ptladder/cli/config.hpp"

namespace ptladder::cli {

/// One table cell. Doubles that are NaN mark failed or undefined cells.
using Cell = std::variant<double, std::int64_t, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// A table written next to the primary output. `suffix` is empty for the
/// primary table and e.g. ".windows" for companions.
struct NamedTable {
    std::string suffix;
    Table table;
};

struct ExperimentResult {
    std::vector<NamedTable> tables;  ///< primary table first
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
    std::size_t failed_cells = 0;
};

/// Runs the configured experiment without touching the filesystem. The result
/// depends only on the config, never on the worker count. Expects a
/// validated config; module errors propagate unchanged.
ExperimentResult compute_experiment(const ExperimentConfig& config);

}  // namespace ptladder::cli
