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

#include "ptladder/lattice.hpp"

#include <cmath>
#include <numbers>

#include "ptladder/errors.hpp"

namespace ptladder {

ConvergenceError::ConvergenceError(std::size_t size, std::size_t iteration_cap,
                                   const std::string& detail)
    : NumericalError("eigensolver did not converge for a " + std::to_string(size) + "x" +
                     std::to_string(size) + " matrix within " + std::to_string(iteration_cap) +
                     " QR iterations: " + detail),
      size_(size),
      cap_(iteration_cap) {}

SingularSystemError::SingularSystemError(std::size_t pivot_cell, const std::string& detail)
    : NumericalError("singular scattering system at unit cell " + std::to_string(pivot_cell) +
                     ": " + detail),
      pivot_cell_(pivot_cell) {}

std::string_view to_string(Topology topology) {
    switch (topology) {
        case Topology::CircularPeriodic: return "circular";
        case Topology::MoebiusPeriodic: return "moebius";
        case Topology::OpenLadder: return "ladder";
        case Topology::TwistedOpen: return "twisted";
    }
    return "unknown";
}

Topology parse_topology(std::string_view text) {
    if (text == "circular" || text == "CircularPeriodic") return Topology::CircularPeriodic;
    if (text == "moebius" || text == "mobius" || text == "MoebiusPeriodic")
        return Topology::MoebiusPeriodic;
    if (text == "ladder" || text == "open" || text == "OpenLadder") return Topology::OpenLadder;
    if (text == "twisted" || text == "TwistedOpen") return Topology::TwistedOpen;
    throw DomainError("unknown topology '" + std::string(text) + "'");
}

bool is_periodic(Topology topology) {
    return topology == Topology::CircularPeriodic || topology == Topology::MoebiusPeriodic;
}

bool is_twisted(Topology topology) {
    return topology == Topology::MoebiusPeriodic || topology == Topology::TwistedOpen;
}

void LatticeSpec::validate() const {
    if (n_cells < 2) {
        throw DomainError("n_cells must be at least 2, got " + std::to_string(n_cells));
    }
    if (is_twisted(topology) && n_cells % 2 != 0) {
        throw DomainError("topology '" + std::string(to_string(topology)) +
                          "' requires an even n_cells, got " + std::to_string(n_cells));
    }
}

std::string_view to_string(Parity parity) {
    return parity == Parity::Even ? "even" : "odd";
}

UnitCellBlocks UnitCellBlocks::from(const LatticeSpec& spec) {
    const double d = spec.intra_hop;
    const double t = spec.inter_hop;
    UnitCellBlocks blocks;
    blocks.h0 << spec.upper_onsite(), -d, -d, spec.lower_onsite();
    blocks.h1 << -t, 0.0, 0.0, -t;
    blocks.h1_twist << 0.0, -t, -t, 0.0;
    return blocks;
}

BlochPoint BlochPoint::at(const LatticeSpec& spec, double k) {
    BlochPoint p;
    p.k = k;
    p.h_vec << cplx(-spec.intra_hop, 0.0), spec.upper_onsite();
    p.h0_scalar = -2.0 * spec.inter_hop * std::cos(k);
    return p;
}

Mat2c build_bloch_hamiltonian(const LatticeSpec& spec, double k) {
    const BlochPoint p = BlochPoint::at(spec, k);
    const cplx hx = p.h_vec(0);
    const cplx hz = p.h_vec(1);
    Mat2c h;
    h << p.h0_scalar + hz, hx, hx, p.h0_scalar - hz;
    return h;
}

std::pair<cplx, cplx> bloch_eigenvalues(const LatticeSpec& spec, double k) {
    const BlochPoint p = BlochPoint::at(spec, k);
    // h . h, not |h|^2: the field is complex and the bilinear form is what
    // appears in the characteristic polynomial.
    const cplx norm = std::sqrt(p.h_vec(0) * p.h_vec(0) + p.h_vec(1) * p.h_vec(1));
    return {p.h0_scalar + norm, p.h0_scalar - norm};
}

MatrixXc build_real_space_hamiltonian(const LatticeSpec& spec) {
    spec.validate();
    const int n = spec.n_cells;
    const UnitCellBlocks blocks = UnitCellBlocks::from(spec);
    MatrixXc h = MatrixXc::Zero(2 * n, 2 * n);

    for (int c = 0; c < n; ++c) h.block<2, 2>(2 * c, 2 * c) = blocks.h0;

    for (int c = 0; c + 1 < n; ++c) {
        const bool twisted_bond = spec.topology == Topology::TwistedOpen && c == spec.twist_cell();
        const Mat2c& hop = twisted_bond ? blocks.h1_twist : blocks.h1;
        h.block<2, 2>(2 * (c + 1), 2 * c) = hop;
        h.block<2, 2>(2 * c, 2 * (c + 1)) = hop.transpose();
    }

    if (is_periodic(spec.topology)) {
        const Mat2c& hop =
            spec.topology == Topology::MoebiusPeriodic ? blocks.h1_twist : blocks.h1;
        // += so that N = 2 picks up both the direct and the wrap-around bond.
        h.block<2, 2>(0, 2 * (n - 1)) += hop;
        h.block<2, 2>(2 * (n - 1), 0) += hop.transpose();
    }
    return h;
}

namespace {

Mat2c pt_cell_basis() {
    const double s = 1.0 / std::numbers::sqrt2;
    Mat2c v;
    v << cplx(s, 0.0), cplx(0.0, s), cplx(s, 0.0), cplx(0.0, -s);
    return v;
}

}  // namespace

Eigen::MatrixXd build_pt_real_form(const LatticeSpec& spec) {
    if (spec.delta != 0.0) {
        throw DomainError("PT-real form requires delta = 0");
    }
    const MatrixXc h = build_real_space_hamiltonian(spec);
    const Mat2c v = pt_cell_basis();
    const Mat2c vh = v.adjoint();
    const Eigen::Index n = spec.n_cells;
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto blk = h.block<2, 2>(2 * i, 2 * j);
            if (blk.isZero(0.0)) continue;
            r.block<2, 2>(2 * i, 2 * j) = (vh * blk * v).real();
        }
    }
    return r;
}

VectorXc pt_real_to_site_basis(const Eigen::Ref<const VectorXc>& w) {
    const Mat2c v = pt_cell_basis();
    VectorXc out(w.size());
    for (Eigen::Index c = 0; c + 1 < w.size(); c += 2) {
        out.segment<2>(c) = v * w.segment<2>(c);
    }
    return out;
}

std::vector<ParityLevel> analytic_cll_spectrum(const LatticeSpec& spec) {
    if (spec.topology != Topology::CircularPeriodic) {
        throw DomainError("closed-form CLL spectrum requires the circular topology");
    }
    spec.validate();
    const int n = spec.n_cells;
    std::vector<ParityLevel> levels;
    levels.reserve(2 * static_cast<std::size_t>(n));
    for (int m = 1; m <= n; ++m) {
        const double k = 2.0 * std::numbers::pi * m / n;
        const auto [plus, minus] = bloch_eigenvalues(spec, k);
        levels.push_back({minus, Parity::Even});
        levels.push_back({plus, Parity::Odd});
    }
    return levels;
}

std::vector<ParityLevel> analytic_mll_spectrum(const LatticeSpec& spec) {
    if (spec.topology != Topology::MoebiusPeriodic) {
        throw DomainError("closed-form MLL spectrum requires the Moebius topology");
    }
    if (spec.gamma != 0.0 || spec.delta != 0.0) {
        throw DomainError("closed-form MLL spectrum is only available for delta = gamma = 0");
    }
    spec.validate();
    const int n = spec.n_cells;
    const double d = spec.intra_hop;
    const double t = spec.inter_hop;
    std::vector<ParityLevel> levels;
    levels.reserve(2 * static_cast<std::size_t>(n));
    for (int m = 1; m <= n; ++m) {
        const double k_even = 2.0 * std::numbers::pi * m / n;
        const double k_odd = (2.0 * m - 1.0) * std::numbers::pi / n;
        levels.push_back({-2.0 * t * std::cos(k_even) - d, Parity::Even});
        levels.push_back({-2.0 * t * std::cos(k_odd) + d, Parity::Odd});
    }
    return levels;
}

}  // namespace ptladder
