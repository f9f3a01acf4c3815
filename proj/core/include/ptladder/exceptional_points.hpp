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
#include <string_view>
#include <utility>
#include <vector>

#include "ptladder/spectral.hpp"

namespace ptladder {

enum class EpKind {
    MergePoint,  ///< the pair is real below gamma_star and a conjugate pair above
    SplitPoint,  ///< the pair is a conjugate pair below gamma_star and real above
};

std::string_view to_string(EpKind kind);

struct ExceptionalPoint {
    double gamma_star = 0.0;
    cplx energy_star;
    std::pair<std::size_t, std::size_t> branch_pair;  ///< (lo, hi) branch indices
    EpKind kind = EpKind::MergePoint;
    /// |v^T v| / |v|^2 of the coalescing right eigenvector; NaN when not computed.
    double self_orthogonality = 0.0;
    /// Gap between the coalescing pair at gamma_star.
    double pair_gap = 0.0;
    /// Width of the final bracket around gamma_star.
    double bracket_width = 0.0;
};

/// A local minimum of a pair gap that is not accompanied by a phase change
/// (an avoided crossing). Reported for diagnostics, never as an EP.
struct NearDegeneracy {
    double gamma = 0.0;
    std::pair<std::size_t, std::size_t> branch_pair;
    double gap = 0.0;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct EpSearchOptions {
    double ep_tol = 1e-8;
    double phase_tol = 1e-9;
    bool compute_self_orthogonality = true;
    /// Pair-gap minima below this value without a phase change are reported
    /// as near degeneracies.
    double near_degeneracy_gap = 1e-3;
    /// A refined pair whose gap at gamma_star exceeds this is reported as a
    /// near degeneracy instead of an EP.
    double max_pair_gap = 1e-4;
    SweepOptions sweep;
};

struct EpSearchResult {
    std::vector<ExceptionalPoint> points;  ///< sorted by gamma_star
    std::vector<NearDegeneracy> near_degeneracies;
    SweepResult sweep;                     ///< the coarse sweep used for detection
};

/// Scans a coarse sweep of `coarse_steps` intervals over `range` for branch
/// pairs whose PT phase flips inside an interval, then refines each pair on
/// the squared pair gap, which crosses zero linearly at a square-root
/// branch point. Refinement stops when the pair gap is <= ep_tol or the
/// bracket is <= 1e-10. Requires coarse_steps >= 8 and ep_tol > 0.
EpSearchResult locate_exceptional_points(const MatrixFamily& family, Interval range,
                                         int coarse_steps, const EpSearchOptions& options = {});

EpSearchResult locate_exceptional_points(const LatticeSpec& spec, Interval range,
                                         int coarse_steps, const EpSearchOptions& options = {});

/// A gamma interval in which one branch pair is a conjugate pair.
struct BrokenWindow {
    double gamma_lo = 0.0;
    double gamma_hi = 0.0;
    double width = 0.0;
    bool open_lo = false;  ///< no MergePoint opens the window (gamma_lo = -inf)
    bool open_hi = false;  ///< no SplitPoint closes the window (gamma_hi = +inf)
    /// Number of identical windows collapsed into this one (degenerate pairs).
    std::size_t multiplicity = 1;
    std::vector<std::pair<std::size_t, std::size_t>> branch_pairs;
    cplx energy;  ///< coalescence energy at the opening EP
};

/// Pairs each MergePoint with the next SplitPoint on the same branch pair.
/// Windows with identical bounds and energy are collapsed. Unpaired points
/// give open-ended windows. Input must be sorted by gamma_star.
std::vector<BrokenWindow> broken_windows(const std::vector<ExceptionalPoint>& points,
                                         double merge_tol = 1e-7);

/// Groups EPs whose gamma_star lie within `tol` of their neighbour.
struct EpCluster {
    double gamma_center = 0.0;
    double gamma_spread = 0.0;  ///< max - min gamma_star inside the cluster
    std::vector<std::size_t> members;
};

std::vector<EpCluster> cluster_exceptional_points(const std::vector<ExceptionalPoint>& points,
                                                  double tol);

/// |v^T v| / |v|^2 for the right eigenvector of `matrix` closest to `energy`,
/// computed by shifted inverse iteration.
double self_orthogonality(const MatrixXc& matrix, cplx energy);

}  // namespace ptladder
