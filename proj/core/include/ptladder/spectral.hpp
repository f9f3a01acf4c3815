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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ptladder/lattice.hpp"

namespace ptladder {

/// Eigenvalues (with algebraic multiplicity) of one matrix, optionally with
/// right eigenvectors. Column j of right_eigenvectors pairs with eigenvalues[j].
struct Spectrum {
    std::vector<cplx> eigenvalues;
    std::optional<MatrixXc> right_eigenvectors;
    double gamma = 0.0;
};

/// Dense non-Hermitian eigendecomposition (Hessenberg reduction followed by
/// shifted QR, capped at 30 sweeps per row). Eigenvectors are normalised to
/// unit Euclidean norm. Throws ConvergenceError when the cap is reached.
Spectrum eigendecompose(const MatrixXc& matrix, bool want_vectors);

/// Spectrum of the real-space lattice Hamiltonian. For delta = 0 the solve
/// runs on the PT-real form, which returns exactly real eigenvalues in the
/// unbroken phase and exact conjugate pairs in the broken phase; otherwise
/// it falls back to the complex solver. Eigenvectors are in the site basis.
Spectrum lattice_spectrum(const LatticeSpec& spec, bool want_vectors = false);

/// A one-parameter matrix family gamma -> M(gamma) with a fast eigenvalue
/// routine. Sweeps and EP searches only see the family.
struct MatrixFamily {
    std::function<MatrixXc(double)> matrix;
    std::function<std::vector<cplx>(double)> eigenvalues;
};

MatrixFamily lattice_family(const LatticeSpec& spec);
MatrixFamily dense_family(std::function<MatrixXc(double)> matrix);

/// Assignment of the eigenvalues at one parameter value to the branches at
/// the previous value.
struct BranchMatch {
    std::vector<std::size_t> assignment;  ///< branch i -> index into the new list
    double max_distance = 0.0;
    bool ambiguous = false;
};

/// Greedy minimal-distance bipartite assignment: all (branch, candidate)
/// distances are visited in increasing order and each pair is accepted if
/// both ends are still free. A branch is ambiguous when a second, distinct
/// candidate lies within `tol` of its accepted distance; ties between a
/// value and its complex conjugate are not ambiguous because either choice
/// keeps conjugate pairs together.
BranchMatch match_branches(std::span<const cplx> previous, std::span<const cplx> next,
                           double tol);

struct SweepOptions {
    double matching_tol = 1e-9;
    int max_halvings = 4;  ///< step-halving depth for ambiguous matches
    unsigned workers = 0;  ///< 0 = hardware concurrency
};

/// Continued eigenvalue branches over a parameter grid.
struct SweepResult {
    std::vector<double> gamma_grid;
    /// branches[b][k]: value of branch b at gamma_grid[k].
    std::vector<std::vector<cplx>> branches;
    /// order[k][b]: index of branch b in the raw spectrum computed at grid point k.
    std::vector<std::vector<std::size_t>> order;
    /// Largest matched distance over all steps.
    double continuation_residual = 0.0;
    /// Grid indices k whose step k-1 -> k stayed ambiguous after halving.
    std::vector<std::size_t> flagged_steps;

    std::size_t branch_count() const { return branches.size(); }
};

/// Continues branches through precomputed spectra. When `refine` is set,
/// ambiguous steps are re-matched through midpoints evaluated with it.
SweepResult continue_branches(std::span<const double> gamma_grid,
                              const std::vector<std::vector<cplx>>& spectra,
                              const SweepOptions& options = {},
                              const std::function<std::vector<cplx>(double)>& refine = {});

/// Evaluates the family on a strictly increasing grid (concurrently) and
/// continues branches in grid order.
SweepResult sweep_spectrum(const MatrixFamily& family, std::span<const double> gamma_grid,
                           const SweepOptions& options = {});

/// sweep_spectrum over the gain/loss parameter of a lattice.
SweepResult sweep_spectrum(const LatticeSpec& spec, std::span<const double> gamma_grid,
                           const SweepOptions& options = {});

enum class Phase { Unbroken, Broken };

struct PhaseLabel {
    Phase phase = Phase::Unbroken;
    double im_magnitude = 0.0;
};

struct PhaseClassification {
    std::vector<PhaseLabel> labels;
    std::size_t n_unbroken = 0;
    std::size_t n_broken = 0;
    double max_im = 0.0;
};

/// Labels each eigenvalue Unbroken when |Im| <= tol, Broken otherwise.
PhaseClassification classify_pt_phase(const Spectrum& spectrum, double tol);
PhaseClassification classify_pt_phase(std::span<const cplx> eigenvalues, double tol);

}  // namespace ptladder
