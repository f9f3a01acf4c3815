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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ptladder/errors.hpp"
#include "ptladder/spectral.hpp"

namespace ptladder {

namespace {

struct Candidate {
    double distance;
    std::size_t branch;
    std::size_t target;
};

std::vector<cplx> permuted(std::span<const cplx> values, const std::vector<std::size_t>& order) {
    std::vector<cplx> out(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) out[i] = values[order[i]];
    return out;
}

struct StepMatch {
    std::vector<std::size_t> assignment;
    double max_distance = 0.0;
    bool ambiguous = false;
};

StepMatch match_step(std::span<const cplx> previous, std::span<const cplx> next,
                     double gamma_prev, double gamma_next, int depth, const SweepOptions& options,
                     const std::function<std::vector<cplx>(double)>& refine) {
    BranchMatch direct = match_branches(previous, next, options.matching_tol);
    if (!direct.ambiguous || !refine || depth >= options.max_halvings) {
        return {std::move(direct.assignment), direct.max_distance, direct.ambiguous};
    }
    const double gamma_mid = 0.5 * (gamma_prev + gamma_next);
    const std::vector<cplx> mid = refine(gamma_mid);
    StepMatch left = match_step(previous, mid, gamma_prev, gamma_mid, depth + 1, options, refine);
    const std::vector<cplx> mid_ordered = permuted(mid, left.assignment);
    StepMatch right = match_step(mid_ordered, next, gamma_mid, gamma_next, depth + 1, options, refine);
    // The midpoint list is already in branch order, so the right-hand
    // assignment maps branches straight into `next`.
    return {std::move(right.assignment),
            std::max(left.max_distance, right.max_distance), left.ambiguous || right.ambiguous};
}

}  // namespace

BranchMatch match_branches(std::span<const cplx> previous, std::span<const cplx> next,
                           double tol) {
    if (previous.size() != next.size()) {
        throw DomainError("branch matching requires spectra of equal size");
    }
    const std::size_t n = previous.size();
    std::vector<Candidate> candidates;
    candidates.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            candidates.push_back({std::abs(previous[i] - next[j]), i, j});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        if (a.branch != b.branch) return a.branch < b.branch;
        return a.target < b.target;
    });

    constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();
    BranchMatch out;
    out.assignment.assign(n, kFree);
    std::vector<bool> taken(n, false);
    std::size_t assigned = 0;
    for (const Candidate& c : candidates) {
        if (assigned == n) break;
        if (out.assignment[c.branch] != kFree || taken[c.target]) continue;
        out.assignment[c.branch] = c.target;
        taken[c.target] = true;
        out.max_distance = std::max(out.max_distance, c.distance);
        ++assigned;
    }

    for (std::size_t i = 0; i < n && !out.ambiguous; ++i) {
        const std::size_t j = out.assignment[i];
        const double best = std::abs(previous[i] - next[j]);
        for (std::size_t k = 0; k < n; ++k) {
            if (k == j) continue;
            if (std::abs(std::abs(previous[i] - next[k]) - best) > tol) continue;
            const bool same_value = std::abs(next[k] - next[j]) <= tol;
            const bool conjugate_twin = std::abs(next[k] - std::conj(next[j])) <= tol;
            if (!same_value && !conjugate_twin) {
                out.ambiguous = true;
                break;
            }
        }
    }
    return out;
}

SweepResult continue_branches(std::span<const double> gamma_grid,
                              const std::vector<std::vector<cplx>>& spectra,
                              const SweepOptions& options,
                              const std::function<std::vector<cplx>(double)>& refine) {
    if (gamma_grid.size() != spectra.size()) {
        throw DomainError("continue_branches: grid and spectra sizes differ");
    }
    SweepResult out;
    out.gamma_grid.assign(gamma_grid.begin(), gamma_grid.end());
    if (spectra.empty()) return out;

    const std::size_t n = spectra.front().size();
    out.branches.assign(n, std::vector<cplx>(spectra.size()));
    out.order.resize(spectra.size());

    out.order[0].resize(n);
    std::iota(out.order[0].begin(), out.order[0].end(), std::size_t{0});

    std::vector<cplx> current = spectra[0];
    for (std::size_t b = 0; b < n; ++b) out.branches[b][0] = current[b];

    for (std::size_t k = 1; k < spectra.size(); ++k) {
        if (spectra[k].size() != n) {
            throw DomainError("continue_branches: spectrum size changes along the grid");
        }
        StepMatch step = match_step(current, spectra[k], gamma_grid[k - 1], gamma_grid[k], 0,
                                    options, refine);
        out.continuation_residual = std::max(out.continuation_residual, step.max_distance);
        if (step.ambiguous) out.flagged_steps.push_back(k);
        out.order[k] = step.assignment;
        current = permuted(spectra[k], step.assignment);
        for (std::size_t b = 0; b < n; ++b) out.branches[b][k] = current[b];
    }
    return out;
}

}  // namespace ptladder
