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

#include <utility>
#include <vector>

#include "ptladder/lattice.hpp"

namespace ptladder {

/// Two semi-infinite single-channel leads with hopping -v0/2, attached to
/// the first (input) and last (output) unit cell.
struct LeadSpec {
    double v0 = 10.0;
    double gamma_u_in = 1.0;
    double gamma_d_in = 1.0;
    double gamma_u_out = 1.0;
    double gamma_d_out = 1.0;

    /// Throws DomainError unless v0 > 0 and all couplings are finite.
    void validate() const;
    bool symmetric() const;
    /// Input and output contacts exchanged.
    LeadSpec swapped() const;

    /// Contact vectors G = (-gamma_u, -gamma_d).
    Eigen::Vector2d input_coupling() const { return {-gamma_u_in, -gamma_d_in}; }
    Eigen::Vector2d output_coupling() const { return {-gamma_u_out, -gamma_d_out}; }

    bool operator==(const LeadSpec&) const = default;
};

/// (e^{iq}, e^{-iq}) = -E/v0 +/- i sqrt(1 - (E/v0)^2). Throws DomainError
/// when |E| >= v0.
std::pair<cplx, cplx> lead_momentum(double energy, double v0);

/// The bordered block-tridiagonal system for the unknowns
/// (r, Psi_1, ..., Psi_N, t):
///   row 0:        (v0/2) r + G_in^T Psi_1                       = -v0/2
///   cell 1:       e^{iq} G_in r + (H0 - E) Psi_1 + H1 Psi_2     = -e^{-iq} G_in
///   cell j:       H1^dag Psi_{j-1} + (H0 - E) Psi_j + H1 Psi_{j+1} = 0
///   cell N:       H1^dag Psi_{N-1} + (H0 - E) Psi_N + e^{iq} G_out t = 0
///   last row:     G_out^T Psi_N + (v0/2) t                      = 0
/// with the crossed block replacing H1 on the twisted bond.
struct ScatteringSystem {
    int n_cells = 0;
    double energy = 0.0;
    double v0 = 0.0;
    cplx phase;      ///< e^{iq}
    cplx phase_inv;  ///< e^{-iq}
    Eigen::Vector2d g_in;
    Eigen::Vector2d g_out;
    std::vector<Mat2c> diagonal;  ///< H0 - E per cell
    std::vector<Mat2c> upper;     ///< block (j, j+1)
    std::vector<Mat2c> lower;     ///< block (j+1, j)

    Eigen::Index dimension() const { return 2 * n_cells + 2; }
    MatrixXc dense_matrix() const;
    VectorXc rhs() const;
    /// A x for the bordered system.
    VectorXc apply(const VectorXc& x) const;
};

/// Requires an open topology (ladder or twisted) and |E| < v0.
ScatteringSystem assemble_scattering_system(const LatticeSpec& spec, const LeadSpec& leads,
                                            double energy);

struct ScatteringResult {
    cplx r;
    cplx t;
    VectorXc internal;  ///< Psi_1 .. Psi_N, index 2*cell + leg
    double reflection_prob = 0.0;
    double transmission_prob = 0.0;
    double flux_residual = 0.0;  ///< 1 - |r|^2 - |t|^2
    double residual = 0.0;       ///< |A x - b| / |b|
    bool used_dense_fallback = false;
};

/// Eliminates r and t into the end cells and runs a 2x2 block Thomas
/// recursion. Falls back to dense LU with partial pivoting when a pivot
/// block has condition number above 1e12 or the residual exceeds 1e-9 |b|.
/// Throws SingularSystemError when the system is singular.
ScatteringResult solve_scattering(const ScatteringSystem& system);

/// Dense LU with partial pivoting on the full bordered matrix.
ScatteringResult solve_scattering_dense(const ScatteringSystem& system);

/// assemble_scattering_system followed by solve_scattering.
ScatteringResult scatter(const LatticeSpec& spec, const LeadSpec& leads, double energy);

}  // namespace ptladder
