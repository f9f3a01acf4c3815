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

#include "ptladder/cli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "ptladder/errors.hpp"
#include "ptladder/exceptional_points.hpp"
#include "ptladder/parallel.hpp"
#include "ptladder/rotation.hpp"
#include "ptladder/spectral.hpp"
#include "ptladder/transport_maps.hpp"

namespace ptladder::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

SweepOptions sweep_options(const ExperimentConfig& c) {
    SweepOptions o;
    o.matching_tol = c.matching_tol;
    o.workers = c.workers;
    return o;
}

EpSearchOptions ep_options(const ExperimentConfig& c) {
    EpSearchOptions o;
    o.ep_tol = c.ep_tol;
    o.phase_tol = c.phase_tol;
    o.sweep = sweep_options(c);
    return o;
}

/// Branches whose real part at the first grid point lies in the selection
/// window, ordered by that real part.
std::vector<std::size_t> select_branches(const SweepResult& sweep, const ExperimentConfig& c,
                                         std::size_t limit) {
    std::vector<std::size_t> picked;
    for (std::size_t b = 0; b < sweep.branch_count(); ++b) {
        const double re = sweep.branches[b].front().real();
        if (re >= c.select_re_min && re <= c.select_re_max) picked.push_back(b);
    }
    std::stable_sort(picked.begin(), picked.end(), [&](std::size_t x, std::size_t y) {
        return sweep.branches[x].front().real() < sweep.branches[y].front().real();
    });
    if (picked.size() > limit) picked.resize(limit);
    return picked;
}

ExperimentResult run_spectrum_sweep(const ExperimentConfig& c) {
    const std::vector<double> grid = c.gamma_grid.values();
    const SweepResult sweep = sweep_spectrum(c.lattice, grid, sweep_options(c));
    const std::vector<std::size_t> picked =
        select_branches(sweep, c, std::numeric_limits<std::size_t>::max());

    ExperimentResult out;
    Table table{{"gamma", "branch_id", "re_e", "im_e"}, {}};
    table.rows.reserve(grid.size() * picked.size());
    std::optional<double> first_broken;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        for (std::size_t b : picked) {
            const cplx e = sweep.branches[b][k];
            table.rows.push_back({grid[k], as_int(b), e.real(), e.imag()});
        }
        if (!first_broken) {
            for (const auto& branch : sweep.branches) {
                if (std::abs(branch[k].imag()) > c.phase_tol) {
                    first_broken = grid[k];
                    break;
                }
            }
        }
    }
    out.tables.push_back({"", std::move(table)});
    out.summary["branch_count"] = sweep.branch_count();
    out.summary["selected_branches"] = picked.size();
    out.summary["continuation_residual"] = sweep.continuation_residual;
    out.summary["flagged_steps"] = sweep.flagged_steps.size();
    out.summary["first_broken_gamma"] = first_broken ? json(*first_broken) : json(nullptr);
    return out;
}

ExperimentResult run_ep_search(const ExperimentConfig& c) {
    const EpSearchResult search = locate_exceptional_points(
        c.lattice, {c.gamma_grid.min, c.gamma_grid.max}, c.coarse_steps, ep_options(c));

    ExperimentResult out;
    Table points{{"gamma_star", "re_e", "im_e", "kind", "pair_lo", "pair_hi", "self_orth"}, {}};
    for (const ExceptionalPoint& ep : search.points) {
        points.rows.push_back({ep.gamma_star, ep.energy_star.real(), ep.energy_star.imag(),
                               std::string(to_string(ep.kind)), as_int(ep.branch_pair.first),
                               as_int(ep.branch_pair.second), ep.self_orthogonality});
    }
    Table windows{{"gamma_lo", "gamma_hi", "width", "multiplicity", "re_e", "im_e"}, {}};
    const std::vector<BrokenWindow> found = broken_windows(search.points);
    for (const BrokenWindow& w : found) {
        windows.rows.push_back({w.open_lo ? kNaN : w.gamma_lo, w.open_hi ? kNaN : w.gamma_hi,
                                w.open_lo || w.open_hi ? kNaN : w.width, as_int(w.multiplicity),
                                w.energy.real(), w.energy.imag()});
    }

    json clusters = json::array();
    const double cluster_tol = 1e3 * c.ep_tol;
    for (const EpCluster& cl : cluster_exceptional_points(search.points, cluster_tol)) {
        clusters.push_back({{"gamma_center", cl.gamma_center},
                            {"gamma_spread", cl.gamma_spread},
                            {"members", cl.members.size()}});
    }
    double max_gap = 0.0;
    for (const ExceptionalPoint& ep : search.points) max_gap = std::max(max_gap, ep.pair_gap);

    out.tables.push_back({"", std::move(points)});
    out.tables.push_back({".windows", std::move(windows)});
    out.summary["ep_count"] = search.points.size();
    out.summary["window_count"] = found.size();
    out.summary["near_degeneracies"] = search.near_degeneracies.size();
    out.summary["max_pair_gap"] = max_gap;
    out.summary["cluster_tolerance"] = cluster_tol;
    out.summary["clusters"] = std::move(clusters);
    out.summary["continuation_residual"] = search.sweep.continuation_residual;
    return out;
}

Table trace_table(const ZeroEnergyTrace& trace) {
    Table t{{"gamma", "T", "R"}, {}};
    for (std::size_t k = 0; k < trace.gamma_grid.size(); ++k) {
        t.rows.push_back({trace.gamma_grid[k], trace.transmission[k], trace.reflection[k]});
    }
    return t;
}

Table ep_match_table(const ZeroEnergyTrace& trace) {
    Table t{{"gamma_ep", "gamma_peak", "peak_t", "offset_steps", "within_one_step"}, {}};
    for (const EpPeakMatch& m : trace.ep_matches) {
        t.rows.push_back({m.gamma_ep, m.gamma_peak, m.peak_transmission, m.offset_steps,
                          m.within_one_step});
    }
    return t;
}

TraceOptions trace_options(const ExperimentConfig& c) {
    TraceOptions o;
    o.ep_coarse_steps = c.coarse_steps;
    o.ep_options = ep_options(c);
    o.workers = c.workers;
    return o;
}

json trace_summary(const ZeroEnergyTrace& trace) {
    double max_t = 0.0;
    for (double v : trace.transmission) {
        if (std::isfinite(v)) max_t = std::max(max_t, v);
    }
    std::size_t matched = 0;
    for (const EpPeakMatch& m : trace.ep_matches) matched += m.within_one_step ? 1 : 0;
    json s;
    s["max_transmission"] = max_t;
    s["local_maxima"] = trace.local_maxima.size();
    s["zero_energy_eps"] = trace.zero_energy_eps.size();
    s["eps_matched_within_one_step"] = matched;
    s["failed_cells"] = trace.failed_cells;
    return s;
}

bool emits_trace_companion(const ExperimentConfig& c) {
    return c.preset == "fig6-ladder" || c.preset == "fig6-twisted";
}

ExperimentResult run_transmission_map(const ExperimentConfig& c) {
    const std::vector<double> e_grid = c.energy_grid.values();
    const std::vector<double> g_grid = c.gamma_grid.values();
    const TransmissionMap map = transmission_map(c.lattice, c.leads, e_grid, g_grid, c.workers);

    ExperimentResult out;
    Table table{{"energy", "gamma", "T", "R"}, {}};
    table.rows.reserve(e_grid.size() * g_grid.size());
    for (std::size_t i = 0; i < e_grid.size(); ++i) {
        for (std::size_t j = 0; j < g_grid.size(); ++j) {
            const auto ii = static_cast<Eigen::Index>(i);
            const auto jj = static_cast<Eigen::Index>(j);
            table.rows.push_back({e_grid[i], g_grid[j], map.t_values(ii, jj), map.r_values(ii, jj)});
        }
    }
    out.tables.push_back({"", std::move(table)});
    out.failed_cells = map.failed_cells;
    out.summary["cells"] = e_grid.size() * g_grid.size();
    out.summary["failed_cells"] = map.failed_cells;
    out.summary["dense_fallbacks"] = map.dense_fallbacks;
    out.summary["max_abs_flux_residual"] = map.max_abs_flux_residual;

    if (emits_trace_companion(c)) {
        const ZeroEnergyTrace trace = zero_energy_trace(c.lattice, c.leads, g_grid, trace_options(c));
        out.tables.push_back({".trace", trace_table(trace)});
        if (!trace.ep_matches.empty()) out.tables.push_back({".ep_matches", ep_match_table(trace)});
        out.failed_cells += trace.failed_cells;
        out.summary["zero_energy_trace"] = trace_summary(trace);
    }
    return out;
}

ExperimentResult run_zero_energy_trace(const ExperimentConfig& c) {
    const ZeroEnergyTrace trace =
        zero_energy_trace(c.lattice, c.leads, c.gamma_grid.values(), trace_options(c));
    ExperimentResult out;
    out.tables.push_back({"", trace_table(trace)});
    out.tables.push_back({".ep_matches", ep_match_table(trace)});
    out.failed_cells = trace.failed_cells;
    out.summary = trace_summary(trace);
    return out;
}

/// Largest distance between the two spectra after greedy nearest pairing.
double spectrum_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    return match_branches(a, b, 0.0).max_distance;
}

ExperimentResult run_detangle_check(const ExperimentConfig& c) {
    const DetangledTransportCheck check =
        detangled_transport_check(c.lattice, c.leads, c.energy_grid.values());
    const DetangledLattice detangled = detangle_transform(c.lattice);
    const double similarity =
        spectrum_distance(eigendecompose(build_real_space_hamiltonian(c.lattice), false).eigenvalues,
                          eigendecompose(detangled.matrix, false).eigenvalues);

    ExperimentResult out;
    Table levels{{"chain", "level", "nearest_extremum", "offset_steps", "aligned", "t_at_level"}, {}};
    std::size_t f_count = 0;
    for (const LevelAlignment& a : check.levels) {
        f_count += a.chain == ChainKind::F ? 1 : 0;
        levels.rows.push_back({std::string(a.chain == ChainKind::P ? "p" : "f"), a.level,
                               a.nearest_extremum, a.offset_steps, a.aligned,
                               a.transmission_at_level});
    }
    Table transmission{{"energy", "T"}, {}};
    for (std::size_t i = 0; i < check.e_grid.size(); ++i) {
        transmission.rows.push_back({check.e_grid[i], check.transmission[i]});
    }
    std::size_t failed = 0;
    for (double v : check.transmission) failed += std::isnan(v) ? 1 : 0;

    out.tables.push_back({"", std::move(levels)});
    out.tables.push_back({".transmission", std::move(transmission)});
    out.failed_cells = failed;
    out.summary["contact"] = check.contact == ContactMode::Symmetric ? "symmetric" : "lower_only";
    out.summary["similarity_error"] = similarity;
    out.summary["p_resonances_aligned"] = check.p_resonances_aligned;
    out.summary["f_antiresonances_aligned"] = check.f_antiresonances_aligned;
    out.summary["f_levels"] = f_count;
    out.summary["deep_f_dips"] = check.deep_f_dips;
    out.summary["cross_coupling_re"] = detangled.chains.cross_coupling.real();
    out.summary["cross_coupling_im"] = detangled.chains.cross_coupling.imag();
    out.summary["failed_cells"] = failed;
    return out;
}

ExperimentResult run_mode_weights(const ExperimentConfig& c) {
    const std::vector<double> grid = c.gamma_grid.values();
    const SweepResult sweep = sweep_spectrum(c.lattice, grid, sweep_options(c));
    const std::vector<std::size_t> picked =
        select_branches(sweep, c, static_cast<std::size_t>(c.max_states));
    if (picked.empty()) {
        throw DomainError("no eigenvalue branch has a real part in [" +
                          std::to_string(c.select_re_min) + ", " + std::to_string(c.select_re_max) +
                          "] at gamma = " + std::to_string(grid.front()));
    }

    struct Row {
        cplx energy;
        ModeWeights weights;
        bool rotated = false;
    };
    std::vector<Row> rows(grid.size() * picked.size());
    std::vector<char> singular(grid.size(), 0);
    parallel_for(grid.size(), c.workers, [&](std::size_t k) {
        const LatticeSpec spec = c.lattice.with_gamma(grid[k]);
        const Spectrum s = lattice_spectrum(spec, true);
        std::optional<RotationAngle> theta;
        try {
            theta = complex_rotation_angle(spec.intra_hop, spec.delta, spec.gamma);
        } catch (const SingularAngleError&) {
            singular[k] = 1;
        }
        std::vector<char> used(s.eigenvalues.size(), 0);
        for (std::size_t p = 0; p < picked.size(); ++p) {
            const cplx target = sweep.branches[picked[p]][k];
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < s.eigenvalues.size(); ++j) {
                const double dist = std::abs(s.eigenvalues[j] - target);
                if (!used[j] && dist < best_d) {
                    best_d = dist;
                    best = j;
                }
            }
            used[best] = 1;
            Row& row = rows[k * picked.size() + p];
            row.energy = s.eigenvalues[best];
            const VectorXc v = s.right_eigenvectors->col(static_cast<Eigen::Index>(best));
            const VectorXc unit = v / v.norm();
            if (theta) {
                row.weights = mode_weights(unit, spec, *theta).aggregate;
                row.rotated = true;
            } else {
                row.weights = mode_weights(unit, spec, RotationAngle{0.0, 0.0}).aggregate;
            }
        }
    });

    ExperimentResult out;
    Table table{{"gamma", "state_id", "re_e", "im_e", "alpha_sq", "beta_sq", "alpha_theta_sq",
                 "beta_theta_sq"},
                {}};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        for (std::size_t p = 0; p < picked.size(); ++p) {
            const Row& r = rows[k * picked.size() + p];
            table.rows.push_back({grid[k], as_int(picked[p]), r.energy.real(), r.energy.imag(),
                                  r.weights.alpha_sq, r.weights.beta_sq,
                                  r.rotated ? r.weights.alpha_theta_sq : kNaN,
                                  r.rotated ? r.weights.beta_theta_sq : kNaN});
        }
    }
    std::size_t n_singular = 0;
    for (char s : singular) n_singular += s ? 1 : 0;
    out.tables.push_back({"", std::move(table)});
    out.summary["states"] = picked.size();
    out.summary["singular_angle_points"] = n_singular;
    out.summary["continuation_residual"] = sweep.continuation_residual;
    return out;
}

}  // namespace

ExperimentResult compute_experiment(const ExperimentConfig& config) {
    switch (config.experiment) {
        case Experiment::SpectrumSweep: return run_spectrum_sweep(config);
        case Experiment::EpSearch: return run_ep_search(config);
        case Experiment::TransmissionMap: return run_transmission_map(config);
        case Experiment::ZeroEnergyTrace: return run_zero_energy_trace(config);
        case Experiment::DetangleCheck: return run_detangle_check(config);
        case Experiment::ModeWeights: return run_mode_weights(config);
    }
    throw DomainError("unknown experiment");
}

}  // namespace ptladder::cli
