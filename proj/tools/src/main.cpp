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

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptladder/cli/config.hpp"
#include "ptladder/cli/experiments.hpp"
#include "ptladder/cli/output.hpp"
#include "ptladder/errors.hpp"

#ifndef PTLADDER_VERSION
#define PTLADDER_VERSION "unknown"
#endif

namespace {

using namespace ptladder;
using namespace ptladder::cli;

enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericalError = 2, kIoError = 3 };

std::string utc_timestamp(std::chrono::system_clock::time_point t) {
    const std::time_t secs = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw OutputError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectra, exceptional points and transport of PT-symmetric ladder lattices"};
    app.set_version_flag("--version", PTLADDER_VERSION);

    std::string target;
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_path;
    std::string format;
    int workers = -1;

    std::string targets = "experiment or preset: spectrum_sweep, ep_search, transmission_map, "
                          "zero_energy_trace, detangle_check, mode_weights";
    for (const auto& p : preset_names()) targets += ", " + p;
    app.add_option("target", target, targets)->required();
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--set", overrides, "override one key, e.g. --set lattice.n_cells=40")
        ->take_all();
    app.add_option("--out", out_path, "output path stem");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--workers", workers, "worker threads (0 = all cores)")
        ->check(CLI::Range(0, 4096));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    ExperimentConfig config;
    try {
        const bool preset = is_preset(target);
        std::optional<Experiment> experiment;
        if (preset) {
            apply_preset(config, target);
        } else {
            experiment = parse_experiment(target);
            config.experiment = *experiment;
        }
        if (!config_path.empty()) apply_document(config, read_text(config_path));
        if (experiment) config.experiment = *experiment;
        for (const std::string& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                throw ConfigError(0, kv, "--set expects key=value");
            }
            apply_assignment(config, kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!out_path.empty()) config.output_path = out_path;
        if (!format.empty()) apply_assignment(config, "output.format", format);
        if (workers >= 0) config.workers = static_cast<unsigned>(workers);
        validate(config);
    } catch (const ConfigError& e) {
        std::cerr << "ptladder: config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const OutputError& e) {
        std::cerr << "ptladder: " << e.what() << '\n';
        return kIoError;
    } catch (const DomainError& e) {
        std::cerr << "ptladder: config error: " << e.what() << '\n';
        return kConfigError;
    }

    const auto wall_start = std::chrono::system_clock::now();
    const auto start = std::chrono::steady_clock::now();
    const std::string context = std::string(to_string(config.experiment));
    try {
        const ExperimentResult result = compute_experiment(config);
        RunInfo info;
        info.version = PTLADDER_VERSION;
        info.started_at = utc_timestamp(wall_start);
        info.duration_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const std::vector<WrittenFile> files = write_outputs(config, result, info);
        for (const WrittenFile& f : files) {
            std::cout << f.path.string() << " (" << f.rows << " rows)\n";
        }
        if (result.failed_cells > 0) {
            std::cerr << "ptladder: " << result.failed_cells << " cells failed and were written as nan\n";
        }
    } catch (const DomainError& e) {
        std::cerr << "ptladder: " << context << ": " << e.what() << '\n';
        return kConfigError;
    } catch (const NumericalError& e) {
        std::cerr << "ptladder: " << context << ": numerical failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (const OutputError& e) {
        std::cerr << "ptladder: " << e.what() << '\n';
        return kIoError;
    }
    return kOk;
}
