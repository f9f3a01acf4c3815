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

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ptladder/cli/experiments.hpp"

namespace ptladder::cli {

/// A file could not be written. The message names the path.
class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Header row plus one line per row, LF line endings. Doubles use 15
/// significant digits; NaN is written as `nan`.
std::string render_csv(const Table& table);

/// {"columns": [...], "rows": [[...], ...]} with NaN and infinities as null.
std::string render_json(const Table& table);

/// 64-bit FNV-1a hash of a byte string.
std::uint64_t fnv1a64(std::string_view bytes);

/// Output stem: the configured path with a trailing .csv or .json removed.
std::filesystem::path output_stem(const ExperimentConfig& config);

struct WrittenFile {
    std::filesystem::path path;
    std::size_t rows = 0;
    std::uint64_t checksum = 0;
};

struct RunInfo {
    std::string version;
    std::string started_at;  ///< ISO 8601 UTC
    double duration_seconds = 0.0;
};

/// Writes every table of `result` in the configured format plus
/// `<stem>.manifest.json`. Returns the data files in table order.
std::vector<WrittenFile> write_outputs(const ExperimentConfig& config,
                                       const ExperimentResult& result, const RunInfo& info);

/// Manifest document (without trailing newline).
std::string render_manifest(const ExperimentConfig& config, const ExperimentResult& result,
                            const RunInfo& info, const std::vector<WrittenFile>& files);

}  // namespace ptladder::cli
