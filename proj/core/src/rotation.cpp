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

#include "ptladder/rotation.hpp"

#include <cmath>
#include <numbers>

#include "ptladder/errors.hpp"

namespace ptladder {

namespace {

constexpr double kBackSubstitutionTol = 1e-12;
constexpr double kNormTol = 1e-8;

cplx cot(cplx x) { return std::cos(x) / std::sin(x); }

}  // namespace

RotationAngle complex_rotation_angle(double d, double delta, double gamma,
                                     std::optional<PtRegime> regime_hint) {
    if (d == 0.0) throw DomainError("rotation angle requires a nonzero rung hopping d");
    if (!std::isfinite(d) || !std::isfinite(delta) || !std::isfinite(gamma)) {
        throw DomainError("rotation angle requires finite parameters");
    }
    const cplx target = cplx(delta, gamma) / (2.0 * d);

    RotationAngle theta;
    if (delta == 0.0) {
        const double ratio = gamma / (2.0 * d);
        if (std::abs(ratio) == 1.0) {
            throw SingularAngleError(
                "rotation angle diverges at the exceptional point gamma = 2d");
        }
        const PtRegime regime = std::abs(ratio) < 1.0 ? PtRegime::Unbroken : PtRegime::Broken;
        if (regime_hint && *regime_hint != regime) {
            throw DomainError("regime hint contradicts gamma / 2d = " + std::to_string(ratio));
        }
        if (regime == PtRegime::Unbroken) {
            theta.theta_r = std::numbers::pi / 4.0;
            theta.theta_i = -0.5 * std::atanh(ratio);
        } else {
            theta.theta_r = 0.0;
            theta.theta_i = -0.5 * std::atanh(1.0 / ratio);
        }
    } else {
        cplx two_theta = std::atan(1.0 / target);
        if (two_theta.real() < 0.0) two_theta += std::numbers::pi;
        theta.theta_r = 0.5 * two_theta.real();
        theta.theta_i = 0.5 * two_theta.imag();
    }

    if (target != cplx(0.0, 0.0)) {
        const cplx residual = cot(2.0 * theta.value()) - target;
        if (!(std::abs(residual) <= kBackSubstitutionTol * (1.0 + std::abs(target)))) {
            throw NumericalError("rotation angle failed back-substitution, residual " +
                                 std::to_string(std::abs(residual)));
        }
    }
    return theta;
}

Mat2c rotation_matrix(const RotationAngle& theta) {
    const cplx c = std::cos(theta.value());
    const cplx s = std::sin(theta.value());
    Mat2c u;
    u << c, -s, s, c;
    return u;
}

cplx decoupling_term(double d, double delta, double gamma, const RotationAngle& theta) {
    const cplx two_theta = 2.0 * theta.value();
    return cplx(delta / 2.0, gamma / 2.0) * std::sin(two_theta) - d * std::cos(two_theta);
}

RotationDiagonalization diagonalize_by_rotation(const LatticeSpec& spec, double k) {
    RotationDiagonalization out;
    out.angle = complex_rotation_angle(spec.intra_hop, spec.delta, spec.gamma);
    const Mat2c u = rotation_matrix(out.angle);
    const Mat2c rotated = u * build_bloch_hamiltonian(spec, k) * u.transpose();
    out.off_diagonal = std::max(std::abs(rotated(0, 1)), std::abs(rotated(1, 0)));

    const cplx eps_minus = bloch_eigenvalues(spec, k).second;
    cplx first = rotated(0, 0);
    cplx second = rotated(1, 1);
    if (std::abs(second - eps_minus) < std::abs(first - eps_minus)) std::swap(first, second);
    out.diagonal = Mat2c::Zero();
    out.diagonal(0, 0) = first;
    out.diagonal(1, 1) = second;
    return out;
}

ModeWeightReport mode_weights(const VectorXc& state, const LatticeSpec& spec,
                              const RotationAngle& theta) {
    const Eigen::Index n = spec.n_cells;
    if (state.size() != 2 * n) {
        throw DomainError("mode_weights: state length " + std::to_string(state.size()) +
                          " does not match 2N = " + std::to_string(2 * n));
    }
    const double norm = state.norm();
    if (std::abs(norm - 1.0) > kNormTol) {
        throw DomainError("mode_weights: state must have unit norm, got " + std::to_string(norm));
    }

    const Mat2c u = rotation_matrix(theta);
    ModeWeightReport report;
    report.per_cell.reserve(static_cast<std::size_t>(n));
    double rotated_upper = 0.0;
    double rotated_total = 0.0;
    for (Eigen::Index c = 0; c < n; ++c) {
        const Vec2c cell = state.segment<2>(2 * c);
        const Vec2c rotated = u * cell;
        ModeWeights w;
        w.alpha_sq = std::norm(cell(0));
        w.beta_sq = std::norm(cell(1));
        const double upper = std::norm(rotated(0));
        const double total = upper + std::norm(rotated(1));
        if (total > 0.0) {
            w.alpha_theta_sq = upper / total;
            w.beta_theta_sq = 1.0 - w.alpha_theta_sq;
        }
        const double cell_total = w.alpha_sq + w.beta_sq;
        report.aggregate.alpha_sq += w.alpha_sq;
        report.aggregate.beta_sq += w.beta_sq;
        if (cell_total > 0.0) {
            w.alpha_sq /= cell_total;
            w.beta_sq /= cell_total;
        }
        rotated_upper += upper;
        rotated_total += total;
        report.per_cell.push_back(w);
    }
    if (rotated_total > 0.0) {
        report.aggregate.alpha_theta_sq = rotated_upper / rotated_total;
        report.aggregate.beta_theta_sq = 1.0 - report.aggregate.alpha_theta_sq;
    }
    return report;
}

DetangledLattice detangle_transform(const LatticeSpec& spec) {
    if (spec.topology != Topology::OpenLadder) {
        throw DomainError("detangle_transform requires the open ladder topology, got '" +
                          std::string(to_string(spec.topology)) + "'");
    }
    spec.validate();
    DetangledLattice out;
    out.chains.f_onsite = spec.intra_hop;
    out.chains.p_onsite = -spec.intra_hop;
    out.chains.cross_coupling = cplx(spec.delta / 2.0, spec.gamma / 2.0);
    out.chains.chain_hop = -spec.inter_hop;

    const double s = 1.0 / std::numbers::sqrt2;
    Mat2c u;
    u << s, -s, s, s;
    const MatrixXc h = build_real_space_hamiltonian(spec);
    const Eigen::Index n = spec.n_cells;
    out.matrix = MatrixXc::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = std::max<Eigen::Index>(0, i - 1); j <= std::min(n - 1, i + 1); ++j) {
            out.matrix.block<2, 2>(2 * i, 2 * j) = u * h.block<2, 2>(2 * i, 2 * j) * u.transpose();
        }
    }
    return out;
}

}  // namespace ptladder
