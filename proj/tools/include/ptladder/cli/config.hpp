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
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ptladder/lattice.hpp"
#include "ptladder/transport.hpp"

namespace ptladder::cli {

/// Invalid configuration. `line` is 0 when the problem is not tied to a
/// line of the document (command-line overrides, cross-field checks).
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, std::string field, const std::string& message);

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

enum class Experiment {
    SpectrumSweep,
    EpSearch,
    TransmissionMap,
    ZeroEnergyTrace,
    DetangleCheck,
    ModeWeights,
};

std::string_view to_string(Experiment experiment);
/// Throws ConfigError for unknown names.
Experiment parse_experiment(std::string_view text);
bool is_transport(Experiment experiment);

enum class OutputFormat { Csv, Json };
std::string_view to_string(OutputFormat format);

/// count equally spaced points from min to max inclusive (min alone when
/// count = 1).
struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    int count = 1;

    std::vector<double> values() const;
    bool operator==(const GridSpec&) const = default;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::SpectrumSweep;
    std::string preset;  ///< empty when no preset was applied
    unsigned workers = 0;

    LatticeSpec lattice;
    LeadSpec leads;

    GridSpec gamma_grid{0.0, 3.0, 601};
    GridSpec energy_grid{-4.0, 4.0, 801};

    int coarse_steps = 400;
    double ep_tol = 1e-8;
    double phase_tol = 1e-9;
    double matching_tol = 1e-9;
    /// Branch/state selection by real part of the energy.
    double select_re_min = -std::numeric_limits<double>::infinity();
    double select_re_max = std::numeric_limits<double>::infinity();
    int max_states = 4;

    std::string output_path = "ptladder_out";
    OutputFormat format = OutputFormat::Csv;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Names of the built-in figure presets.
const std::vector<std::string>& preset_names();
bool is_preset(std::string_view name);
/// Overwrites `config` with the preset's values. Throws ConfigError for an
/// unknown name.
void apply_preset(ExperimentConfig& config, std::string_view name);

/// Applies one `key = value` assignment. Keys are `section.key` or a bare
/// key that is unique across sections.
void apply_assignment(ExperimentConfig& config, std::string_view key, std::string_view value,
                      std::size_t line = 0);

/// Parses a flat `key = value` document with optional [lattice], [leads],
/// [grid], [spectral] and [output] sections, `#` comments and blank lines.
/// A `preset` key is applied before every other assignment. Assignments are
/// applied on top of `base`; the result is validated.
ExperimentConfig parse_config(std::string_view text, const ExperimentConfig& base = {});

/// Applies assignments without validating.
void apply_document(ExperimentConfig& config, std::string_view text);

/// Throws ConfigError for out-of-range values and experiment/topology
/// mismatches.
void validate(const ExperimentConfig& config);

/// Canonical document that parse_config maps back to `config`.
std::string emit_config(const ExperimentConfig& config);

}  // namespace ptladder::cli
