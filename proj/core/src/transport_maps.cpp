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

#include "ptladder/transport_maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ptladder/errors.hpp"
#include "ptladder/parallel.hpp"

namespace ptladder {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDeepDip = 0.01;

void check_band(const std::vector<double>& e_grid, const LeadSpec& leads) {
    for (double e : e_grid) {
        if (!(std::abs(e) < leads.v0)) {
            throw DomainError("energy " + std::to_string(e) + " lies outside the lead band (|E| < " +
                              std::to_string(leads.v0) + ")");
        }
    }
}

double mean_step(const std::vector<double>& grid) {
    if (grid.size() < 2) return 0.0;
    return (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
}

struct CellOutcome {
    double t = kNaN;
    double r = kNaN;
    double flux = kNaN;
    bool dense = false;
};

CellOutcome solve_cell(const LatticeSpec& spec, const LeadSpec& leads, double energy) {
    try {
        const ScatteringResult res = scatter(spec, leads, energy);
        return {res.transmission_prob, res.reflection_prob, res.flux_residual,
                res.used_dense_fallback};
    } catch (const NumericalError&) {
        return {};
    }
}

template <class Compare>
std::vector<std::size_t> extrema(const std::vector<double>& v, Compare strictly_beyond) {
    std::vector<std::size_t> out;
    for (std::size_t k = 1; k + 1 < v.size(); ++k) {
        if (std::isnan(v[k - 1]) || std::isnan(v[k]) || std::isnan(v[k + 1])) continue;
        if (!strictly_beyond(v[k - 1], v[k]) && strictly_beyond(v[k], v[k + 1])) out.push_back(k);
    }
    return out;
}

}  // namespace

std::vector<std::size_t> local_maxima(const std::vector<double>& values) {
    return extrema(values, [](double a, double b) { return a > b; });
}

std::vector<std::size_t> local_minima(const std::vector<double>& values) {
    return extrema(values, [](double a, double b) { return a < b; });
}

std::vector<double> open_chain_levels(int n_cells, double onsite, double hop) {
    std::vector<double> levels;
    levels.reserve(static_cast<std::size_t>(std::max(n_cells, 0)));
    for (int m = 1; m <= n_cells; ++m) {
        levels.push_back(onsite - 2.0 * hop * std::cos(m * std::numbers::pi / (n_cells + 1)));
    }
    std::sort(levels.begin(), levels.end());
    return levels;
}

TransmissionMap transmission_map(const LatticeSpec& spec, const LeadSpec& leads,
                                 const std::vector<double>& e_grid,
                                 const std::vector<double>& gamma_grid, unsigned workers) {
    if (e_grid.empty() || gamma_grid.empty()) {
        throw DomainError("transmission_map requires nonempty energy and gamma grids");
    }
    check_band(e_grid, leads);
    // Surfaces topology and lead errors before the workers start.
    (void)assemble_scattering_system(spec, leads, e_grid.front());

    TransmissionMap map;
    map.e_grid = e_grid;
    map.gamma_grid = gamma_grid;
    const std::size_t rows = e_grid.size();
    const std::size_t cols = gamma_grid.size();
    std::vector<CellOutcome> cells(rows * cols);
    parallel_for(cells.size(), workers, [&](std::size_t idx) {
        const std::size_t i = idx / cols;
        const std::size_t j = idx % cols;
        cells[idx] = solve_cell(spec.with_gamma(gamma_grid[j]), leads, e_grid[i]);
    });

    map.t_values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    map.r_values.resizeLike(map.t_values);
    for (std::size_t idx = 0; idx < cells.size(); ++idx) {
        const auto i = static_cast<Eigen::Index>(idx / cols);
        const auto j = static_cast<Eigen::Index>(idx % cols);
        const CellOutcome& c = cells[idx];
        map.t_values(i, j) = c.t;
        map.r_values(i, j) = c.r;
        if (std::isnan(c.t)) {
            ++map.failed_cells;
            continue;
        }
        if (c.dense) ++map.dense_fallbacks;
        map.max_abs_flux_residual = std::max(map.max_abs_flux_residual, std::abs(c.flux));
    }
    return map;
}

ZeroEnergyTrace zero_energy_trace(const LatticeSpec& spec, const LeadSpec& leads,
                                  const std::vector<double>& gamma_grid,
                                  const TraceOptions& options) {
    const TransmissionMap row = transmission_map(spec, leads, {0.0}, gamma_grid, options.workers);
    ZeroEnergyTrace trace;
    trace.gamma_grid = gamma_grid;
    trace.transmission.assign(row.t_values.data(), row.t_values.data() + row.t_values.size());
    trace.reflection.assign(row.r_values.data(), row.r_values.data() + row.r_values.size());
    trace.failed_cells = row.failed_cells;
    trace.local_maxima = local_maxima(trace.transmission);

    if (!options.compare_eps || spec.topology != Topology::TwistedOpen || gamma_grid.size() < 2) {
        return trace;
    }
    EpSearchOptions ep_options = options.ep_options;
    ep_options.sweep.workers = options.workers;
    const EpSearchResult search = locate_exceptional_points(
        spec, {gamma_grid.front(), gamma_grid.back()}, options.ep_coarse_steps, ep_options);
    for (const ExceptionalPoint& ep : search.points) {
        if (std::abs(ep.energy_star.real()) > options.zero_energy_tol ||
            std::abs(ep.energy_star.imag()) > options.zero_energy_tol) {
            continue;
        }
        if (!trace.zero_energy_eps.empty() &&
            std::abs(trace.zero_energy_eps.back().gamma_star - ep.gamma_star) <= 1e-9) {
            continue;
        }
        trace.zero_energy_eps.push_back(ep);
    }

    const double step = mean_step(gamma_grid);
    for (const ExceptionalPoint& ep : trace.zero_energy_eps) {
        EpPeakMatch match;
        match.gamma_ep = ep.gamma_star;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k : trace.local_maxima) {
            const double distance = std::abs(gamma_grid[k] - ep.gamma_star);
            if (distance < best) {
                best = distance;
                match.gamma_peak = gamma_grid[k];
                match.peak_transmission = trace.transmission[k];
            }
        }
        if (std::isinf(best)) {
            match.gamma_peak = kNaN;
            match.peak_transmission = kNaN;
            match.offset_steps = kNaN;
        } else {
            match.offset_steps = (match.gamma_peak - match.gamma_ep) / step;
            match.within_one_step = std::abs(match.offset_steps) <= 1.0;
        }
        trace.ep_matches.push_back(match);
    }
    return trace;
}

DetangledTransportCheck detangled_transport_check(const LatticeSpec& spec, const LeadSpec& leads,
                                                  const std::vector<double>& e_grid) {
    if (spec.topology != Topology::OpenLadder) {
        throw DomainError("detangled transport check requires the open ladder topology");
    }
    DetangledTransportCheck check;
    if (leads.symmetric()) {
        check.contact = ContactMode::Symmetric;
    } else if (leads.gamma_u_in == 0.0 && leads.gamma_u_out == 0.0) {
        check.contact = ContactMode::LowerOnly;
    } else {
        throw DomainError(
            "detangled transport check needs symmetric contacts or contacts on the lower leg only");
    }
    if (e_grid.size() < 3) throw DomainError("detangled transport check needs at least 3 energies");

    const TransmissionMap column = transmission_map(spec, leads, e_grid, {spec.gamma});
    check.e_grid = e_grid;
    check.transmission.assign(column.t_values.data(),
                              column.t_values.data() + column.t_values.size());
    check.local_maxima = local_maxima(check.transmission);
    check.local_minima = local_minima(check.transmission);

    const double step = mean_step(e_grid);
    auto align = [&](ChainKind chain, double level) {
        LevelAlignment a;
        a.chain = chain;
        a.level = level;
        const auto& candidates = chain == ChainKind::P ? check.local_maxima : check.local_minima;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k : candidates) {
            if (std::abs(e_grid[k] - level) < best) {
                best = std::abs(e_grid[k] - level);
                a.nearest_extremum = e_grid[k];
            }
        }
        if (std::isinf(best)) {
            a.nearest_extremum = kNaN;
            a.offset_steps = kNaN;
        } else {
            a.offset_steps = (a.nearest_extremum - level) / step;
            a.aligned = std::abs(a.offset_steps) <= 1.0;
        }
        const auto upper = std::lower_bound(e_grid.begin(), e_grid.end(), level);
        const std::size_t hi = std::min<std::size_t>(upper - e_grid.begin(), e_grid.size() - 1);
        const std::size_t lo = hi > 0 ? hi - 1 : 0;
        a.transmission_at_level = std::min(check.transmission[lo], check.transmission[hi]);
        return a;
    };

    std::size_t n_p = 0, n_f = 0, aligned_p = 0, aligned_f = 0;
    for (ChainKind chain : {ChainKind::P, ChainKind::F}) {
        const double onsite = chain == ChainKind::P ? -spec.intra_hop : spec.intra_hop;
        for (double level : open_chain_levels(spec.n_cells, onsite, spec.inter_hop)) {
            if (level < e_grid.front() || level > e_grid.back()) continue;
            const LevelAlignment a = align(chain, level);
            if (chain == ChainKind::P) {
                ++n_p;
                aligned_p += a.aligned ? 1 : 0;
            } else {
                ++n_f;
                aligned_f += a.aligned ? 1 : 0;
                check.deep_f_dips += a.transmission_at_level < kDeepDip ? 1 : 0;
            }
            check.levels.push_back(a);
        }
    }
    check.p_resonances_aligned = n_p > 0 && aligned_p == n_p;
    check.f_antiresonances_aligned = n_f > 0 && aligned_f == n_f;
    return check;
}

}  // namespace ptladder
