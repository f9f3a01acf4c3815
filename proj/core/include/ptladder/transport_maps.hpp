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
#include <vector>

#include "ptladder/exceptional_points.hpp"
#include "ptladder/transport.hpp"

namespace ptladder {

/// |t|^2 and |r|^2 on an (E, gamma) grid. Row i is e_grid[i], column j is
/// gamma_grid[j]. Cells whose solve failed hold NaN.
struct TransmissionMap {
    std::vector<double> e_grid;
    std::vector<double> gamma_grid;
    Eigen::MatrixXd t_values;
    Eigen::MatrixXd r_values;
    std::size_t failed_cells = 0;
    std::size_t dense_fallbacks = 0;
    double max_abs_flux_residual = 0.0;  ///< over successful cells
};

/// Solves every (E, gamma) cell independently on `workers` threads. Numerical
/// failures are recorded as NaN cells; out-of-band energies or an invalid
/// lattice throw DomainError before any work starts.
TransmissionMap transmission_map(const LatticeSpec& spec, const LeadSpec& leads,
                                 const std::vector<double>& e_grid,
                                 const std::vector<double>& gamma_grid, unsigned workers = 0);

/// One zero-energy EP compared with the nearest local maximum of T(0, gamma).
struct EpPeakMatch {
    double gamma_ep = 0.0;
    double gamma_peak = 0.0;
    double peak_transmission = 0.0;
    double offset_steps = 0.0;  ///< (gamma_peak - gamma_ep) / grid step
    bool within_one_step = false;
};

struct ZeroEnergyTrace {
    std::vector<double> gamma_grid;
    std::vector<double> transmission;
    std::vector<double> reflection;
    std::vector<std::size_t> local_maxima;  ///< interior grid indices
    std::size_t failed_cells = 0;
    std::vector<ExceptionalPoint> zero_energy_eps;
    std::vector<EpPeakMatch> ep_matches;
};

struct TraceOptions {
    /// Compare local maxima with the EPs of the isolated lattice (twisted
    /// topology only).
    bool compare_eps = true;
    /// An EP counts as zero-energy when |Re E*| and |Im E*| are below this.
    double zero_energy_tol = 1e-6;
    int ep_coarse_steps = 400;
    EpSearchOptions ep_options;
    unsigned workers = 0;
};

ZeroEnergyTrace zero_energy_trace(const LatticeSpec& spec, const LeadSpec& leads,
                                  const std::vector<double>& gamma_grid,
                                  const TraceOptions& options = {});

enum class ChainKind { P, F };

struct LevelAlignment {
    ChainKind chain = ChainKind::P;
    double level = 0.0;              ///< open-chain eigenvalue
    double nearest_extremum = 0.0;   ///< energy of the nearest maximum (P) or minimum (F)
    double offset_steps = 0.0;
    bool aligned = false;            ///< within one grid step
    double transmission_at_level = 0.0;  ///< min of T over the grid points bracketing the level
};

enum class ContactMode { Symmetric, LowerOnly };

/// Transmission of the open ladder against the levels of its two detangled
/// chains, p: -d - 2t cos(m pi/(N+1)) and f: +d - 2t cos(m pi/(N+1)).
struct DetangledTransportCheck {
    ContactMode contact = ContactMode::Symmetric;
    std::vector<double> e_grid;
    std::vector<double> transmission;
    std::vector<std::size_t> local_maxima;
    std::vector<std::size_t> local_minima;
    std::vector<LevelAlignment> levels;  ///< only levels inside the E grid
    bool p_resonances_aligned = false;
    bool f_antiresonances_aligned = false;
    std::size_t deep_f_dips = 0;  ///< f levels with transmission_at_level < 0.01
};

/// Requires the open ladder topology and either symmetric contacts or
/// contacts on the lower leg only (gamma_u_in = gamma_u_out = 0).
DetangledTransportCheck detangled_transport_check(const LatticeSpec& spec, const LeadSpec& leads,
                                                  const std::vector<double>& e_grid);

/// Open uniform chain levels onsite - 2 t cos(m pi / (N + 1)), m = 1..N, ascending.
std::vector<double> open_chain_levels(int n_cells, double onsite, double hop);

/// Interior indices k with v[k-1] <= v[k] > v[k+1] (maxima) or
/// v[k-1] >= v[k] < v[k+1] (minima). NaN neighbourhoods are skipped.
std::vector<std::size_t> local_maxima(const std::vector<double>& values);
std::vector<std::size_t> local_minima(const std::vector<double>& values);

}  // namespace ptladder
