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

#include <optional>
#include <vector>

#include "ptladder/lattice.hpp"

namespace ptladder {

/// Complex rotation angle theta = theta_r + i theta_i.
struct RotationAngle {
    double theta_r = 0.0;
    double theta_i = 0.0;

    cplx value() const { return {theta_r, theta_i}; }
};

enum class PtRegime { Unbroken, Broken };

/// Solves cot(2 theta) = (delta + i gamma) / (2 d) on the principal branch
/// (theta_r in [0, pi/2)). For delta = 0 the solution is
///   |gamma| < 2|d|:  theta_r = pi/4, theta_i = -atanh(gamma / 2d) / 2,
///   |gamma| > 2|d|:  theta_r = 0,    theta_i = -acoth(gamma / 2d) / 2.
/// The result is checked by back-substitution to 1e-12.
/// Throws DomainError for d = 0 or a hint that contradicts the regime, and
/// SingularAngleError at the exceptional point |gamma| = 2|d|, delta = 0.
RotationAngle complex_rotation_angle(double d, double delta, double gamma,
                                     std::optional<PtRegime> regime_hint = std::nullopt);

/// [[cos theta, -sin theta], [sin theta, cos theta]]. Complex orthogonal
/// (U U^T = 1); unitary only for real theta.
Mat2c rotation_matrix(const RotationAngle& theta);

/// Off-diagonal element of U(theta) h U(theta)^T for the Bloch block; it
/// vanishes at the angle returned by complex_rotation_angle.
cplx decoupling_term(double d, double delta, double gamma, const RotationAngle& theta);

struct RotationDiagonalization {
    Mat2c diagonal;       ///< diag(eps_minus, eps_plus)
    RotationAngle angle;  ///< principal angle used for U H U^T
    double off_diagonal = 0.0;
};

/// Diagonalises the Bloch Hamiltonian at wave number k with U H U^T.
/// The diagonal is reported with eps_minus first whatever order the
/// principal angle produces.
RotationDiagonalization diagonalize_by_rotation(const LatticeSpec& spec, double k);

struct ModeWeights {
    double alpha_sq = 0.0;        ///< weight on the upper leg
    double beta_sq = 0.0;         ///< weight on the lower leg
    double alpha_theta_sq = 0.0;  ///< first rotated component, rotated-norm normalised
    double beta_theta_sq = 0.0;
};

struct ModeWeightReport {
    std::vector<ModeWeights> per_cell;  ///< per-cell weights, each normalised within the cell
    ModeWeights aggregate;              ///< sums over cells
};

/// Leg weights of a unit-norm lattice state before and after the per-cell
/// rotation g_n = U(theta) (a_n, b_n). Rotated weights are normalised by the
/// rotated norm because U is not unitary for complex theta.
/// Throws DomainError when the state is not of length 2N or not unit norm.
ModeWeightReport mode_weights(const VectorXc& state, const LatticeSpec& spec,
                              const RotationAngle& theta);

/// Two open chains obtained with the per-cell rotation at theta = pi/4:
/// f_n = (a_n - b_n)/sqrt2 and p_n = (a_n + b_n)/sqrt2.
struct DetangledChainPair {
    cplx f_onsite;        ///< +d
    cplx p_onsite;        ///< -d
    cplx cross_coupling;  ///< (delta + i gamma) / 2, on-site between f_n and p_n
    double chain_hop = 0.0;  ///< -t along both chains
};

struct DetangledLattice {
    DetangledChainPair chains;
    MatrixXc matrix;  ///< U_full H U_full^T in the (f_1, p_1, f_2, p_2, ...) basis
};

/// Requires the open ladder topology.
DetangledLattice detangle_transform(const LatticeSpec& spec);

}  // namespace ptladder
