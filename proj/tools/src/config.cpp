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

#include "ptladder/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>

#include "ptladder/errors.hpp"

namespace ptladder::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(std::string_view text, std::size_t line, const std::string& field) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || std::isnan(value)) {
        throw ConfigError(line, field, "expected a number, got '" + std::string(text) + "'");
    }
    return value;
}

long long parse_integer(std::string_view text, std::size_t line, const std::string& field) {
    long long value = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError(line, field, "expected an integer, got '" + std::string(text) + "'");
    }
    return value;
}

int parse_int(std::string_view text, std::size_t line, const std::string& field) {
    const long long v = parse_integer(text, line, field);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw ConfigError(line, field, "integer out of range");
    }
    return static_cast<int>(v);
}

struct Field {
    std::string_view section;
    std::string_view key;
    std::function<void(ExperimentConfig&, std::string_view, std::size_t, const std::string&)> set;
    /// Empty for write-only aliases.
    std::function<std::string(const ExperimentConfig&)> get;
};

template <class Member>
Field real_field(std::string_view section, std::string_view key, Member member) {
    return {section, key,
            [member](ExperimentConfig& c, std::string_view v, std::size_t line, const std::string& f) {
                std::invoke(member, c) = parse_double(v, line, f);
            },
            [member](const ExperimentConfig& c) {
                return format_double(std::invoke(member, const_cast<ExperimentConfig&>(c)));
            }};
}

template <class Member>
Field int_field(std::string_view section, std::string_view key, Member member) {
    return {section, key,
            [member](ExperimentConfig& c, std::string_view v, std::size_t line, const std::string& f) {
                std::invoke(member, c) = parse_int(v, line, f);
            },
            [member](const ExperimentConfig& c) {
                return std::to_string(std::invoke(member, const_cast<ExperimentConfig&>(c)));
            }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> t;
        t.push_back({"", "experiment",
                     [](ExperimentConfig& c, std::string_view v, std::size_t line, const std::string& f) {
                         try {
                             c.experiment = parse_experiment(v);
                         } catch (const ConfigError& e) {
                             throw ConfigError(line, f, e.what());
                         }
                     },
                     [](const ExperimentConfig& c) { return std::string(to_string(c.experiment)); }});
        t.push_back({"", "workers",
                     [](ExperimentConfig& c, std::string_view v, std::size_t line, const std::string& f) {
                         const long long w = parse_integer(v, line, f);
                         if (w < 0 || w > 4096) throw ConfigError(line, f, "workers must be in [0, 4096]");
                         c.workers = static_cast<unsigned>(w);
                     },
                     [](const ExperimentConfig& c) { return std::to_string(c.workers); }});

        t.push_back(int_field("lattice", "n_cells", [](ExperimentConfig& c) -> int& { return c.lattice.n_cells; }));
        t.push_back(real_field("lattice", "intra_hop", [](ExperimentConfig& c) -> double& { return c.lattice.intra_hop; }));
        t.push_back(real_field("lattice", "inter_hop", [](ExperimentConfig& c) -> double& { return c.lattice.inter_hop; }));
        // Short aliases for the hoppings; write-only so emitted configs use the long names.
        for (auto [alias, member] : {std::pair{"d", &LatticeSpec::intra_hop}, std::pair{"t", &LatticeSpec::inter_hop}}) {
            Field f = real_field("lattice", alias, [member](ExperimentConfig& c) -> double& { return c.lattice.*member; });
            f.get = {};
            t.push_back(std::move(f));
        }
        t.push_back(real_field("lattice", "delta", [](ExperimentConfig& c) -> double& { return c.lattice.delta; }));
        t.push_back(real_field("lattice", "gamma", [](ExperimentConfig& c) -> double& { return c.lattice.gamma; }));
        t.push_back({"lattice", "topology",
                     [](ExperimentConfig& c, std::string_view v, std::size_t line, const std::string& f) {
                         try {
                             c.lattice.topology = parse_topology(v);
                         } catch (const DomainError& e) {
                             throw ConfigError(line, f, e.what());
                         }
                     },
                     [](const ExperimentConfig& c) { return std::string(to_string(c.lattice.topology)); }});

        t.push_back(real_field("leads", "v0", [](ExperimentConfig& c) -> double& { return c.leads.v0; }));
        t.push_back(real_field("leads", "gamma_u_in", [](ExperimentConfig& c) -> double& { return c.leads.gamma_u_in; }));
        t.push_back(real_field("leads", "gamma_d_in", [](ExperimentConfig& c) -> double& { return c.leads.gamma_d_in; }));
        t.push_back(real_field("leads", "gamma_u_out", [](ExperimentConfig& c) -> double& { return c.leads.gamma_u_out; }));
        t.push_back(real_field("leads", "gamma_d_out", [](ExperimentConfig& c) -> double& { return c.leads.gamma_d_out; }));
        t.push_back({"leads", "gamma0",
                     [](ExperimentConfig& c, std::string_view v, std::size_t line, const std::string& f) {
                         const double g = parse_double(v, line, f);
                         c.leads.gamma_u_in = c.leads.gamma_d_in = c.leads.gamma_u_out =
                             c.leads.gamma_d_out = g;
                     },
                     {}});

        t.push_back(real_field("grid", "gamma_min", [](ExperimentConfig& c) -> double& { return c.gamma_grid.min; }));
        t.push_back(real_field("grid", "gamma_max", [](ExperimentConfig& c) -> double& { return c.gamma_grid.max; }));
        t.push_back(int_field("grid", "gamma_count", [](ExperimentConfig& c) -> int& { return c.gamma_grid.count; }));
        t.push_back(real_field("grid", "energy_min", [](ExperimentConfig& c) -> double& { return c.energy_grid.min; }));
        t.push_back(real_field("grid", "energy_max", [](ExperimentConfig& c) -> double& { return c.energy_grid.max; }));
        t.push_back(int_field("grid", "energy_count", [](ExperimentConfig& c) -> int& { return c.energy_grid.count; }));

        t.push_back(int_field("spectral", "coarse_steps", [](ExperimentConfig& c) -> int& { return c.coarse_steps; }));
        t.push_back(real_field("spectral", "ep_tol", [](ExperimentConfig& c) -> double& { return c.ep_tol; }));
        t.push_back(real_field("spectral", "phase_tol", [](ExperimentConfig& c) -> double& { return c.phase_tol; }));
        t.push_back(real_field("spectral", "matching_tol", [](ExperimentConfig& c) -> double& { return c.matching_tol; }));
        t.push_back(real_field("spectral", "select_re_min", [](ExperimentConfig& c) -> double& { return c.select_re_min; }));
        t.push_back(real_field("spectral", "select_re_max", [](ExperimentConfig& c) -> double& { return c.select_re_max; }));
        t.push_back(int_field("spectral", "max_states", [](ExperimentConfig& c) -> int& { return c.max_states; }));

        t.push_back({"output", "path",
                     [](ExperimentConfig& c, std::string_view v, std::size_t, const std::string&) {
                         c.output_path = std::string(v);
                     },
                     [](const ExperimentConfig& c) { return c.output_path; }});
        t.push_back({"output", "format",
                     [](ExperimentConfig& c, std::string_view v, std::size_t line, const std::string& f) {
                         if (v == "csv") {
                             c.format = OutputFormat::Csv;
                         } else if (v == "json") {
                             c.format = OutputFormat::Json;
                         } else {
                             throw ConfigError(line, f, "format must be csv or json, got '" +
                                                            std::string(v) + "'");
                         }
                     },
                     [](const ExperimentConfig& c) { return std::string(to_string(c.format)); }});
        return t;
    }();
    return table;
}

std::string qualified(std::string_view section, std::string_view key) {
    return section.empty() ? std::string(key) : std::string(section) + "." + std::string(key);
}

const Field& find_field(std::string_view section, std::string_view key, std::size_t line) {
    const Field* match = nullptr;
    for (const Field& f : fields()) {
        if (f.key != key) continue;
        if (!section.empty() && f.section != section) continue;
        if (match) throw ConfigError(line, std::string(key), "ambiguous key; qualify it with a section");
        match = &f;
    }
    if (!match) throw ConfigError(line, qualified(section, key), "unknown key");
    return *match;
}

bool known_section(std::string_view s) {
    return s == "lattice" || s == "leads" || s == "grid" || s == "spectral" || s == "output";
}

struct Assignment {
    std::string section;
    std::string key;
    std::string value;
    std::size_t line;
};

std::vector<Assignment> read_document(std::string_view text) {
    std::vector<Assignment> out;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(line_no, std::string(line), "malformed section header");
            const std::string_view name = trim(line.substr(1, line.size() - 2));
            if (!known_section(name)) {
                throw ConfigError(line_no, std::string(name), "unknown section");
            }
            section = std::string(name);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(line_no, std::string(line), "expected 'key = value'");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, "", "empty key");
        std::string sec = section;
        std::string k(key);
        if (const auto dot = key.find('.'); dot != std::string_view::npos) {
            sec = std::string(key.substr(0, dot));
            k = std::string(key.substr(dot + 1));
        }
        out.push_back({sec, k, std::string(value), line_no});
    }
    return out;
}

void apply_one(ExperimentConfig& config, const Assignment& a) {
    if (a.key == "preset" && a.section.empty()) {
        try {
            apply_preset(config, a.value);
        } catch (const ConfigError& e) {
            throw ConfigError(a.line, "preset", e.what());
        }
        return;
    }
    const Field& f = find_field(a.section, a.key, a.line);
    f.set(config, a.value, a.line, qualified(f.section, f.key));
}

ConfigError field_error(const std::string& field, const std::string& message) {
    return ConfigError(0, field, message);
}

}  // namespace

ConfigError::ConfigError(std::size_t line, std::string field, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (field.empty() ? std::string() : field + ": ") + message),
      line_(line),
      field_(std::move(field)) {}

std::string_view to_string(Experiment experiment) {
    switch (experiment) {
        case Experiment::SpectrumSweep: return "spectrum_sweep";
        case Experiment::EpSearch: return "ep_search";
        case Experiment::TransmissionMap: return "transmission_map";
        case Experiment::ZeroEnergyTrace: return "zero_energy_trace";
        case Experiment::DetangleCheck: return "detangle_check";
        case Experiment::ModeWeights: return "mode_weights";
    }
    return "unknown";
}

Experiment parse_experiment(std::string_view text) {
    for (Experiment e : {Experiment::SpectrumSweep, Experiment::EpSearch, Experiment::TransmissionMap,
                         Experiment::ZeroEnergyTrace, Experiment::DetangleCheck,
                         Experiment::ModeWeights}) {
        if (text == to_string(e)) return e;
    }
    throw ConfigError(0, "experiment", "unknown experiment '" + std::string(text) + "'");
}

bool is_transport(Experiment experiment) {
    return experiment == Experiment::TransmissionMap || experiment == Experiment::ZeroEnergyTrace ||
           experiment == Experiment::DetangleCheck;
}

std::string_view to_string(OutputFormat format) {
    return format == OutputFormat::Csv ? "csv" : "json";
}

std::vector<double> GridSpec::values() const {
    std::vector<double> v(static_cast<std::size_t>(std::max(count, 0)));
    if (count == 1) {
        v[0] = min;
        return v;
    }
    const double step = (max - min) / (count - 1);
    for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = min + i * step;
    if (count > 1) v.back() = max;
    return v;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"fig2-cll", "fig2-mll",    "fig3",
                                                "fig4",     "fig6-ladder", "fig6-twisted"};
    return names;
}

bool is_preset(std::string_view name) {
    const auto& names = preset_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

void apply_preset(ExperimentConfig& config, std::string_view name) {
    if (!is_preset(name)) {
        throw ConfigError(0, "preset", "unknown preset '" + std::string(name) + "'");
    }
    ExperimentConfig c;
    c.workers = config.workers;
    c.output_path = std::string(name);
    c.preset = std::string(name);
    if (name == "fig2-cll" || name == "fig2-mll") {
        c.experiment = Experiment::SpectrumSweep;
        c.lattice.topology = name == "fig2-cll" ? Topology::CircularPeriodic : Topology::MoebiusPeriodic;
    } else if (name == "fig3" || name == "fig4") {
        c.experiment = Experiment::ModeWeights;
        if (name == "fig3") {
            c.lattice.topology = Topology::CircularPeriodic;
            c.gamma_grid = {0.0, 1.98, 100};
            c.select_re_min = -0.1;
            c.select_re_max = 0.1;
        } else {
            c.lattice.topology = Topology::MoebiusPeriodic;
            c.gamma_grid = {0.0, 1.0, 201};
            c.select_re_min = -1.05;
            c.select_re_max = -0.95;
        }
    } else {
        c.experiment = Experiment::TransmissionMap;
        c.lattice.topology = name == "fig6-ladder" ? Topology::OpenLadder : Topology::TwistedOpen;
    }
    config = c;
}

void apply_assignment(ExperimentConfig& config, std::string_view key, std::string_view value,
                      std::size_t line) {
    Assignment a{"", std::string(trim(key)), std::string(trim(value)), line};
    if (const auto dot = a.key.find('.'); dot != std::string::npos) {
        a.section = a.key.substr(0, dot);
        a.key = a.key.substr(dot + 1);
        if (!known_section(a.section)) throw ConfigError(line, a.section, "unknown section");
    }
    apply_one(config, a);
}

void apply_document(ExperimentConfig& config, std::string_view text) {
    const std::vector<Assignment> assignments = read_document(text);
    for (const Assignment& a : assignments) {
        if (a.key == "preset" && a.section.empty()) apply_one(config, a);
    }
    for (const Assignment& a : assignments) {
        if (!(a.key == "preset" && a.section.empty())) apply_one(config, a);
    }
}

ExperimentConfig parse_config(std::string_view text, const ExperimentConfig& base) {
    ExperimentConfig config = base;
    apply_document(config, text);
    validate(config);
    return config;
}

void validate(const ExperimentConfig& c) {
    auto check_grid = [](const GridSpec& g, const std::string& name) {
        if (g.count < 1) throw field_error("grid." + name + "_count", "grid count must be at least 1");
        if (!std::isfinite(g.min) || !std::isfinite(g.max)) {
            throw field_error("grid." + name + "_min", "grid bounds must be finite");
        }
        if (g.min > g.max) throw field_error("grid." + name + "_min", "grid min must not exceed max");
        if (g.count > 1 && !(g.min < g.max)) {
            throw field_error("grid." + name + "_max", "a grid with more than one point needs min < max");
        }
    };
    check_grid(c.gamma_grid, "gamma");
    check_grid(c.energy_grid, "energy");

    try {
        c.lattice.validate();
    } catch (const DomainError& e) {
        throw field_error("lattice.n_cells", e.what());
    }
    for (double v : {c.lattice.intra_hop, c.lattice.inter_hop, c.lattice.delta, c.lattice.gamma}) {
        if (!std::isfinite(v)) throw field_error("lattice", "lattice parameters must be finite");
    }

    if (is_transport(c.experiment)) {
        if (is_periodic(c.lattice.topology)) {
            throw field_error("lattice.topology",
                              "experiment '" + std::string(to_string(c.experiment)) +
                                  "' requires an open topology (ladder or twisted), got '" +
                                  std::string(to_string(c.lattice.topology)) + "'");
        }
        if (c.experiment == Experiment::DetangleCheck && c.lattice.topology != Topology::OpenLadder) {
            throw field_error("lattice.topology", "detangle_check requires the ladder topology");
        }
        try {
            c.leads.validate();
        } catch (const DomainError& e) {
            throw field_error("leads.v0", e.what());
        }
        if (c.experiment != Experiment::ZeroEnergyTrace &&
            (std::abs(c.energy_grid.min) >= c.leads.v0 || std::abs(c.energy_grid.max) >= c.leads.v0)) {
            throw field_error("grid.energy_min", "energies must lie inside the lead band |E| < v0");
        }
        if (c.experiment == Experiment::DetangleCheck) {
            const bool symmetric = c.leads.symmetric();
            const bool lower_only = c.leads.gamma_u_in == 0.0 && c.leads.gamma_u_out == 0.0;
            if (!symmetric && !lower_only) {
                throw field_error("leads", "detangle_check needs symmetric or lower-leg-only contacts");
            }
            if (c.energy_grid.count < 3) {
                throw field_error("grid.energy_count", "detangle_check needs at least 3 energies");
            }
        }
    }
    if (c.experiment == Experiment::EpSearch && !(c.gamma_grid.max > c.gamma_grid.min)) {
        throw field_error("grid.gamma_max", "ep_search needs gamma_max > gamma_min");
    }
    if (c.experiment == Experiment::ModeWeights && c.lattice.intra_hop == 0.0) {
        throw field_error("lattice.intra_hop", "mode_weights needs a nonzero rung hopping");
    }
    if (c.coarse_steps < 8) throw field_error("spectral.coarse_steps", "must be at least 8");
    if (!(c.ep_tol > 0.0)) throw field_error("spectral.ep_tol", "must be positive");
    if (!(c.phase_tol > 0.0)) throw field_error("spectral.phase_tol", "must be positive");
    if (!(c.matching_tol > 0.0)) throw field_error("spectral.matching_tol", "must be positive");
    if (c.select_re_min > c.select_re_max) {
        throw field_error("spectral.select_re_min", "must not exceed select_re_max");
    }
    if (c.max_states < 1) throw field_error("spectral.max_states", "must be at least 1");
    if (c.output_path.empty()) throw field_error("output.path", "must not be empty");
    if (c.preset.size() > 0 && !is_preset(c.preset)) {
        throw field_error("preset", "unknown preset '" + c.preset + "'");
    }
}

std::string emit_config(const ExperimentConfig& config) {
    std::string out;
    if (!config.preset.empty()) out += "preset = " + config.preset + "\n";
    std::string_view current = "";
    for (const Field& f : fields()) {
        if (!f.get) continue;
        if (f.section != current) {
            out += "\n[" + std::string(f.section) + "]\n";
            current = f.section;
        }
        out += std::string(f.key) + " = " + f.get(config) + "\n";
    }
    return out;
}

}  // namespace ptladder::cli
