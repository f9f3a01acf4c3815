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

#include "ptladder/transport.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>

#include <Eigen/LU>

#include "ptladder/errors.hpp"

namespace ptladder {

namespace {

constexpr double kPivotConditionLimit = 1e12;
constexpr double kResidualLimit = 1e-9;
constexpr double kSingularRcond = 1e-16;

double norm1(const Mat2c& m) {
    return std::max(std::abs(m(0, 0)) + std::abs(m(1, 0)), std::abs(m(0, 1)) + std::abs(m(1, 1)));
}

/// Inverse of a 2x2 block, or nullopt when its 1-norm condition number
/// exceeds the pivot limit.
std::optional<Mat2c> checked_inverse(const Mat2c& m) {
    const cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    if (det == cplx(0.0, 0.0) || !std::isfinite(std::abs(det))) return std::nullopt;
    Mat2c inv;
    inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    inv /= det;
    const double cond = norm1(m) * norm1(inv);
    if (!(cond <= kPivotConditionLimit)) return std::nullopt;
    return inv;
}

ScatteringResult finish(const ScatteringSystem& system, const VectorXc& x) {
    ScatteringResult out;
    const Eigen::Index dim = system.dimension();
    out.r = x(0);
    out.t = x(dim - 1);
    out.internal = x.segment(1, dim - 2);
    out.reflection_prob = std::norm(out.r);
    out.transmission_prob = std::norm(out.t);
    out.flux_residual = 1.0 - out.reflection_prob - out.transmission_prob;
    const VectorXc b = system.rhs();
    out.residual = (system.apply(x) - b).norm() / b.norm();
    return out;
}

struct ThomasOutcome {
    std::optional<VectorXc> solution;
    std::size_t breakdown_cell = 0;
};

ThomasOutcome block_thomas(const ScatteringSystem& s) {
    const std::size_t n = static_cast<std::size_t>(s.n_cells);
    const Eigen::Vector2cd g_in = s.g_in.cast<cplx>();
    const Eigen::Vector2cd g_out = s.g_out.cast<cplx>();
    const cplx fold = -2.0 * s.phase / s.v0;

    std::vector<Mat2c> pivot_inv(n);
    std::vector<Vec2c> rhs(n, Vec2c::Zero());
    rhs[0] = (s.phase - s.phase_inv) * g_in;

    Mat2c pivot = s.diagonal[0] + fold * g_in * g_in.transpose();
    for (std::size_t j = 0; j < n; ++j) {
        if (j > 0) {
            pivot = s.diagonal[j];
            const Mat2c w = s.lower[j - 1] * pivot_inv[j - 1];
            pivot -= w * s.upper[j - 1];
            rhs[j] -= w * rhs[j - 1];
        }
        if (j + 1 == n) pivot += fold * g_out * g_out.transpose();
        auto inv = checked_inverse(pivot);
        if (!inv) return {std::nullopt, j};
        pivot_inv[j] = *inv;
    }

    VectorXc psi(2 * static_cast<Eigen::Index>(n));
    Vec2c next = pivot_inv[n - 1] * rhs[n - 1];
    psi.segment<2>(2 * static_cast<Eigen::Index>(n - 1)) = next;
    for (std::size_t j = n - 1; j-- > 0;) {
        next = pivot_inv[j] * (rhs[j] - s.upper[j] * next);
        psi.segment<2>(2 * static_cast<Eigen::Index>(j)) = next;
    }

    VectorXc x(s.dimension());
    x(0) = -1.0 - (2.0 / s.v0) * g_in.dot(psi.head<2>());
    x.segment(1, psi.size()) = psi;
    x(x.size() - 1) = -(2.0 / s.v0) * g_out.dot(psi.tail<2>());
    return {std::move(x), 0};
}

ScatteringResult dense_solve(const ScatteringSystem& system, std::optional<std::size_t> hint) {
    const MatrixXc a = system.dense_matrix();
    Eigen::PartialPivLU<MatrixXc> lu(a);
    const double rcond = lu.rcond();
    VectorXc x;
    if (rcond > kSingularRcond) x = lu.solve(system.rhs());
    if (!(rcond > kSingularRcond) || !x.allFinite()) {
        std::size_t cell = 0;
        if (hint) {
            cell = *hint;
        } else {
            Eigen::Index weakest = 0;
            lu.matrixLU().diagonal().cwiseAbs().minCoeff(&weakest);
            const Eigen::Index c = std::clamp<Eigen::Index>((weakest - 1) / 2, 0, system.n_cells - 1);
            cell = static_cast<std::size_t>(c);
        }
        throw SingularSystemError(cell, "reciprocal condition estimate " + std::to_string(rcond) +
                                            " at E = " + std::to_string(system.energy));
    }
    ScatteringResult out = finish(system, x);
    out.used_dense_fallback = true;
    return out;
}

}  // namespace

void LeadSpec::validate() const {
    if (!(v0 > 0.0) || !std::isfinite(v0)) {
        throw DomainError("lead bandwidth v0 must be positive and finite");
    }
    for (double g : {gamma_u_in, gamma_d_in, gamma_u_out, gamma_d_out}) {
        if (!std::isfinite(g)) throw DomainError("lead couplings must be finite");
    }
}

bool LeadSpec::symmetric() const {
    return gamma_u_in == gamma_d_in && gamma_d_in == gamma_u_out && gamma_u_out == gamma_d_out;
}

LeadSpec LeadSpec::swapped() const {
    LeadSpec s = *this;
    std::swap(s.gamma_u_in, s.gamma_u_out);
    std::swap(s.gamma_d_in, s.gamma_d_out);
    return s;
}

std::pair<cplx, cplx> lead_momentum(double energy, double v0) {
    if (!(v0 > 0.0)) throw DomainError("lead bandwidth v0 must be positive");
    const double x = energy / v0;
    if (!(std::abs(x) < 1.0)) {
        throw DomainError("energy " + std::to_string(energy) + " lies outside the lead band (|E| < " +
                          std::to_string(v0) + ")");
    }
    const double root = std::sqrt(1.0 - x * x);
    return {cplx(-x, root), cplx(-x, -root)};
}

MatrixXc ScatteringSystem::dense_matrix() const {
    const Eigen::Index dim = dimension();
    const Eigen::Index last = dim - 1;
    MatrixXc a = MatrixXc::Zero(dim, dim);
    a(0, 0) = v0 / 2.0;
    a.block<1, 2>(0, 1) = g_in.transpose().cast<cplx>();
    a.block<2, 1>(1, 0) = phase * g_in.cast<cplx>();
    for (Eigen::Index j = 0; j < n_cells; ++j) {
        const Eigen::Index row = 1 + 2 * j;
        a.block<2, 2>(row, row) = diagonal[static_cast<std::size_t>(j)];
        if (j + 1 < n_cells) {
            a.block<2, 2>(row, row + 2) = upper[static_cast<std::size_t>(j)];
            a.block<2, 2>(row + 2, row) = lower[static_cast<std::size_t>(j)];
        }
    }
    a.block<2, 1>(last - 2, last) = phase * g_out.cast<cplx>();
    a.block<1, 2>(last, last - 2) = g_out.transpose().cast<cplx>();
    a(last, last) = v0 / 2.0;
    return a;
}

VectorXc ScatteringSystem::rhs() const {
    VectorXc b = VectorXc::Zero(dimension());
    b(0) = -v0 / 2.0;
    b.segment<2>(1) = -phase_inv * g_in.cast<cplx>();
    return b;
}

VectorXc ScatteringSystem::apply(const VectorXc& x) const {
    const Eigen::Index dim = dimension();
    const Eigen::Index last = dim - 1;
    VectorXc y = VectorXc::Zero(dim);
    y(0) = v0 / 2.0 * x(0) + g_in.cast<cplx>().dot(x.segment<2>(1));
    y.segment<2>(1) += phase * g_in.cast<cplx>() * x(0);
    for (Eigen::Index j = 0; j < n_cells; ++j) {
        const Eigen::Index row = 1 + 2 * j;
        const auto jj = static_cast<std::size_t>(j);
        y.segment<2>(row) += diagonal[jj] * x.segment<2>(row);
        if (j + 1 < n_cells) {
            y.segment<2>(row) += upper[jj] * x.segment<2>(row + 2);
            y.segment<2>(row + 2) += lower[jj] * x.segment<2>(row);
        }
    }
    y.segment<2>(last - 2) += phase * g_out.cast<cplx>() * x(last);
    y(last) = g_out.cast<cplx>().dot(x.segment<2>(last - 2)) + v0 / 2.0 * x(last);
    return y;
}

ScatteringSystem assemble_scattering_system(const LatticeSpec& spec, const LeadSpec& leads,
                                            double energy) {
    if (is_periodic(spec.topology)) {
        throw DomainError("transport requires an open topology (ladder or twisted), got '" +
                          std::string(to_string(spec.topology)) + "'");
    }
    if (spec.n_cells < 1) throw DomainError("n_cells must be at least 1");
    if (spec.topology == Topology::TwistedOpen) spec.validate();
    leads.validate();

    ScatteringSystem s;
    s.n_cells = spec.n_cells;
    s.energy = energy;
    s.v0 = leads.v0;
    std::tie(s.phase, s.phase_inv) = lead_momentum(energy, leads.v0);
    s.g_in = leads.input_coupling();
    s.g_out = leads.output_coupling();

    const UnitCellBlocks blocks = UnitCellBlocks::from(spec);
    const Mat2c onsite = blocks.h0 - energy * Mat2c::Identity();
    const auto n = static_cast<std::size_t>(spec.n_cells);
    s.diagonal.assign(n, onsite);
    s.upper.assign(n > 0 ? n - 1 : 0, blocks.h1);
    s.lower.assign(n > 0 ? n - 1 : 0, blocks.h1.adjoint());
    if (spec.topology == Topology::TwistedOpen) {
        const auto twist = static_cast<std::size_t>(spec.twist_cell());
        s.upper[twist] = blocks.h1_twist;
        s.lower[twist] = blocks.h1_twist.adjoint();
    }
    return s;
}

ScatteringResult solve_scattering(const ScatteringSystem& system) {
    ThomasOutcome banded = block_thomas(system);
    if (banded.solution) {
        ScatteringResult out = finish(system, *banded.solution);
        if (out.residual <= kResidualLimit && std::isfinite(out.transmission_prob)) return out;
        return dense_solve(system, std::nullopt);
    }
    return dense_solve(system, banded.breakdown_cell);
}

ScatteringResult solve_scattering_dense(const ScatteringSystem& system) {
    ScatteringResult out = dense_solve(system, std::nullopt);
    out.used_dense_fallback = false;
    return out;
}

ScatteringResult scatter(const LatticeSpec& spec, const LeadSpec& leads, double energy) {
    return solve_scattering(assemble_scattering_system(spec, leads, energy));
}

}  // namespace ptladder
