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

#include "ptladder/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "ptladder/errors.hpp"
#include "ptladder/parallel.hpp"

namespace ptladder {

namespace {

constexpr Eigen::Index kSweepsPerRow = 30;

void normalise_columns(MatrixXc& vectors) {
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
        const double norm = vectors.col(j).norm();
        if (norm > 0.0) vectors.col(j) /= norm;
    }
}

Spectrum real_form_spectrum(const LatticeSpec& spec, bool want_vectors) {
    const Eigen::MatrixXd real_form = build_pt_real_form(spec);
    const Eigen::Index n = real_form.rows();
    Eigen::EigenSolver<Eigen::MatrixXd> solver;
    solver.setMaxIterations(kSweepsPerRow * n);
    solver.compute(real_form, want_vectors);
    if (solver.info() != Eigen::Success) {
        // Francis QR can stall on highly structured real forms; the complex
        // solver on the site basis uses different shifts.
        Spectrum s = eigendecompose(build_real_space_hamiltonian(spec), want_vectors);
        s.gamma = spec.gamma;
        return s;
    }

    Spectrum out;
    out.gamma = spec.gamma;
    const auto& values = solver.eigenvalues();
    out.eigenvalues.assign(values.data(), values.data() + values.size());
    if (want_vectors) {
        const MatrixXc w = solver.eigenvectors();
        MatrixXc v(n, n);
        for (Eigen::Index j = 0; j < n; ++j) v.col(j) = pt_real_to_site_basis(w.col(j));
        normalise_columns(v);
        out.right_eigenvectors = std::move(v);
    }
    return out;
}

}  // namespace

Spectrum eigendecompose(const MatrixXc& matrix, bool want_vectors) {
    if (matrix.rows() != matrix.cols()) {
        throw DomainError("eigendecompose requires a square matrix");
    }
    if (!matrix.allFinite()) {
        throw DomainError("eigendecompose requires finite matrix entries");
    }
    Spectrum out;
    const Eigen::Index n = matrix.rows();
    if (n == 0) return out;

    // ComplexEigenSolver: Householder Hessenberg reduction + implicitly
    // shifted complex QR; its per-row iteration cap is 30.
    Eigen::ComplexEigenSolver<MatrixXc> solver(matrix, want_vectors);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError(static_cast<std::size_t>(n),
                               static_cast<std::size_t>(kSweepsPerRow * n),
                               "shifted complex QR on the Hessenberg form");
    }
    const auto& values = solver.eigenvalues();
    out.eigenvalues.assign(values.data(), values.data() + values.size());
    if (want_vectors) {
        MatrixXc v = solver.eigenvectors();
        normalise_columns(v);
        out.right_eigenvectors = std::move(v);
    }
    return out;
}

Spectrum lattice_spectrum(const LatticeSpec& spec, bool want_vectors) {
    if (spec.delta == 0.0) return real_form_spectrum(spec, want_vectors);
    Spectrum s = eigendecompose(build_real_space_hamiltonian(spec), want_vectors);
    s.gamma = spec.gamma;
    return s;
}

MatrixFamily lattice_family(const LatticeSpec& spec) {
    spec.validate();
    MatrixFamily family;
    family.matrix = [spec](double g) { return build_real_space_hamiltonian(spec.with_gamma(g)); };
    family.eigenvalues = [spec](double g) {
        return lattice_spectrum(spec.with_gamma(g), false).eigenvalues;
    };
    return family;
}

MatrixFamily dense_family(std::function<MatrixXc(double)> matrix) {
    MatrixFamily family;
    family.matrix = matrix;
    family.eigenvalues = [matrix](double g) { return eigendecompose(matrix(g), false).eigenvalues; };
    return family;
}

SweepResult sweep_spectrum(const MatrixFamily& family, std::span<const double> gamma_grid,
                           const SweepOptions& options) {
    for (std::size_t k = 1; k < gamma_grid.size(); ++k) {
        if (!(gamma_grid[k] > gamma_grid[k - 1])) {
            throw DomainError("gamma grid must be strictly increasing");
        }
    }
    std::vector<std::vector<cplx>> spectra(gamma_grid.size());
    parallel_for(gamma_grid.size(), options.workers,
                 [&](std::size_t k) { spectra[k] = family.eigenvalues(gamma_grid[k]); }, 1);
    return continue_branches(gamma_grid, spectra, options, family.eigenvalues);
}

SweepResult sweep_spectrum(const LatticeSpec& spec, std::span<const double> gamma_grid,
                           const SweepOptions& options) {
    return sweep_spectrum(lattice_family(spec), gamma_grid, options);
}

PhaseClassification classify_pt_phase(std::span<const cplx> eigenvalues, double tol) {
    if (!(tol > 0.0)) throw DomainError("phase tolerance must be positive");
    PhaseClassification out;
    out.labels.reserve(eigenvalues.size());
    for (const cplx& e : eigenvalues) {
        const double im = std::abs(e.imag());
        const Phase phase = im <= tol ? Phase::Unbroken : Phase::Broken;
        out.labels.push_back({phase, im});
        (phase == Phase::Unbroken ? out.n_unbroken : out.n_broken) += 1;
        out.max_im = std::max(out.max_im, im);
    }
    return out;
}

PhaseClassification classify_pt_phase(const Spectrum& spectrum, double tol) {
    return classify_pt_phase(spectrum.eigenvalues, tol);
}

}  // namespace ptladder
