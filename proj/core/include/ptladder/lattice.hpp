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

#include <complex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace ptladder {

using cplx = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;
using Vec2c = Eigen::Vector2cd;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

/// How the two legs of the ladder are closed.
enum class Topology {
    CircularPeriodic,  ///< cell N bonds to cell 1 with parallel hoppings
    MoebiusPeriodic,   ///< cell N bonds to cell 1 with crossed hoppings
    OpenLadder,        ///< no closure
    TwistedOpen,       ///< no closure, crossed bond between cells N/2 and N/2+1
};

std::string_view to_string(Topology topology);
/// Accepts the enum spelling and the short aliases circular/moebius/ladder/twisted.
Topology parse_topology(std::string_view text);

bool is_periodic(Topology topology);
bool is_twisted(Topology topology);

/// A two-leg ladder with balanced on-site potentials
///   eps_u = delta/2 + i*gamma/2,  eps_d = -eps_u.
struct LatticeSpec {
    int n_cells = 100;
    double intra_hop = 1.0;  ///< d, rung hopping inside a unit cell
    double inter_hop = 1.0;  ///< t, hopping between neighbouring cells
    double delta = 0.0;      ///< antisymmetric real on-site splitting
    double gamma = 0.0;      ///< antisymmetric imaginary gain/loss
    Topology topology = Topology::CircularPeriodic;

    cplx upper_onsite() const { return {delta / 2.0, gamma / 2.0}; }
    cplx lower_onsite() const { return -upper_onsite(); }

    /// Zero-based index of the cell on the left of the twisted bond.
    int twist_cell() const { return n_cells / 2 - 1; }

    LatticeSpec with_gamma(double g) const {
        LatticeSpec copy = *this;
        copy.gamma = g;
        return copy;
    }

    /// Throws DomainError when n_cells < 2 or a twisted topology has odd n_cells.
    void validate() const;

    bool operator==(const LatticeSpec&) const = default;
};

/// The 2x2 building blocks of every Hamiltonian in this library.
struct UnitCellBlocks {
    Mat2c h0;        ///< [[eps_u, -d], [-d, eps_d]]
    Mat2c h1;        ///< diag(-t, -t)
    Mat2c h1_twist;  ///< antidiag(-t, -t)

    static UnitCellBlocks from(const LatticeSpec& spec);
};

/// Bloch-space data at one wave number. The vector field h does not depend on k.
struct BlochPoint {
    double k = 0.0;
    Eigen::Vector2cd h_vec;  ///< (h_x, h_z) = (-d, delta/2 + i gamma/2)
    cplx h0_scalar;          ///< -2 t cos k

    static BlochPoint at(const LatticeSpec& spec, double k);
};

/// H(k) = h . sigma + h0(k) sigma_0 with h0(k) = -2 t cos k.
Mat2c build_bloch_hamiltonian(const LatticeSpec& spec, double k);

/// (eps_plus, eps_minus) = -2 t cos k +/- sqrt(d^2 + ((delta + i gamma)/2)^2),
/// principal square root.
std::pair<cplx, cplx> bloch_eigenvalues(const LatticeSpec& spec, double k);

/// 2N x 2N matrix in the basis (a_1, b_1, a_2, b_2, ...), index 2*cell + leg.
/// Complex symmetric for every topology.
MatrixXc build_real_space_hamiltonian(const LatticeSpec& spec);

/// For delta = 0 the Hamiltonian commutes with PT (leg swap + conjugation) and
/// is similar to a real matrix. Returns R = V^H H V with the per-cell basis
///   w1 = (1, 1)/sqrt2,  w2 = i (1, -1)/sqrt2.
/// Throws DomainError when delta != 0.
Eigen::MatrixXd build_pt_real_form(const LatticeSpec& spec);

/// Maps a vector expressed in the PT-real basis back to site amplitudes.
VectorXc pt_real_to_site_basis(const Eigen::Ref<const VectorXc>& w);

enum class Parity { Even, Odd };
std::string_view to_string(Parity parity);

struct ParityLevel {
    cplx energy;
    Parity parity;
};

/// Closed-form circular-ladder spectrum: for n = 1..N,
///   -2 t cos(2 n pi / N) - |h|  (even),  -2 t cos(2 n pi / N) + |h|  (odd).
std::vector<ParityLevel> analytic_cll_spectrum(const LatticeSpec& spec);

/// Closed-form Moebius-ladder spectrum (delta = gamma = 0 only): for n = 1..N,
///   -2 t cos(2 n pi / N) - d  (even),  -2 t cos((2n - 1) pi / N) + d  (odd).
std::vector<ParityLevel> analytic_mll_spectrum(const LatticeSpec& spec);

}  // namespace ptladder
