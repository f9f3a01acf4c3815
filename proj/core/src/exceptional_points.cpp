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

#include "ptladder/exceptional_points.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <iterator>
#include <map>

#include <Eigen/LU>
#include <boost/math/tools/toms748_solve.hpp>

#include "ptladder/errors.hpp"
#include "ptladder/parallel.hpp"

namespace ptladder {

namespace {

constexpr double kBracketTol = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> coarse_grid(Interval range, int steps) {
    std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
    const double h = (range.hi - range.lo) / steps;
    for (int k = 0; k <= steps; ++k) grid[static_cast<std::size_t>(k)] = range.lo + k * h;
    grid.back() = range.hi;
    return grid;
}

bool broken(const cplx& value, double phase_tol) { return std::abs(value.imag()) > phase_tol; }

/// Branch-ordered spectra inside one coarse interval. A new parameter value
/// is continued from the closest value already known.
class IntervalTracker {
public:
    IntervalTracker(const MatrixFamily& family, const SweepOptions& options)
        : family_(family), options_(options) {}

    void seed(double gamma, std::vector<cplx> ordered) { known_.emplace(gamma, std::move(ordered)); }

    const std::vector<cplx>& at(double gamma) {
        if (auto it = known_.find(gamma); it != known_.end()) return it->second;
        auto above = known_.lower_bound(gamma);
        auto nearest = above;
        if (above == known_.end()) {
            nearest = std::prev(above);
        } else if (above != known_.begin()) {
            auto below = std::prev(above);
            if (gamma - below->first < above->first - gamma) nearest = below;
        }
        const std::vector<double> grid{nearest->first, gamma};
        const std::vector<std::vector<cplx>> spectra{nearest->second, family_.eigenvalues(gamma)};
        SweepResult step = continue_branches(grid, spectra, options_, family_.eigenvalues);
        std::vector<cplx> ordered(step.branch_count());
        for (std::size_t b = 0; b < ordered.size(); ++b) ordered[b] = step.branches[b][1];
        return known_.emplace(gamma, std::move(ordered)).first->second;
    }

    const std::map<double, std::vector<cplx>>& known() const { return known_; }

private:
    const MatrixFamily& family_;
    const SweepOptions& options_;
    std::map<double, std::vector<cplx>> known_;
};

/// Signed squared pair gap: (lambda_b - lambda_c)^2 > 0 for a real pair and
/// -4 Im(lambda)^2 < 0 for a conjugate pair, so it crosses zero linearly at a
/// square-root branch point. When tracking has paired a real branch with an
/// exact degenerate copy of itself, the nearest distinct eigenvalue is used
/// as its partner instead.
double pair_discriminant(const std::vector<cplx>& values, std::size_t b, std::size_t c,
                         double phase_tol) {
    const cplx vb = values[b];
    const cplx vc = values[c];
    if (broken(vb, phase_tol) || broken(vc, phase_tol)) {
        const double im = std::max(std::abs(vb.imag()), std::abs(vc.imag()));
        return -4.0 * im * im;
    }
    const double copy_tol = 1e-9 * (1.0 + std::abs(vb));
    double gap = std::abs(vb - vc);
    if (gap <= copy_tol) {
        // Without any distinct eigenvalue the pair itself is coalescing.
        double partner = std::numeric_limits<double>::infinity();
        for (const cplx& w : values) {
            const double distance = std::abs(w - vb);
            if (distance > copy_tol) partner = std::min(partner, distance);
        }
        if (std::isfinite(partner)) gap = partner;
    }
    return gap * gap;
}

struct Refinement {
    double gamma_star = 0.0;
    double bracket_width = 0.0;
};

Refinement refine_pair(IntervalTracker& tracker, double g0, double g1, std::size_t b,
                       std::size_t c, const EpSearchOptions& options) {
    const double root_level = options.ep_tol * options.ep_tol;
    auto disc = [&](double g) {
        return pair_discriminant(tracker.at(g), b, c, options.phase_tol);
    };

    // Narrow the bracket with values already computed for other pairs.
    double a = g0, fa = disc(g0);
    double z = g1, fz = disc(g1);
    for (const auto& [g, values] : tracker.known()) {
        if (g < g0 || g > g1) continue;
        const double f = pair_discriminant(values, b, c, options.phase_tol);
        if (std::abs(f) <= root_level) return {g, 0.0};
        if (std::signbit(f) == std::signbit(fa)) {
            if (g > a) { a = g; fa = f; }
        } else {
            z = g;
            fz = f;
            break;
        }
    }

    if (std::signbit(fa) != std::signbit(fz)) {
        double hit = kNaN;
        auto f = [&](double g) {
            const double value = disc(g);
            if (std::abs(value) <= root_level) {
                hit = g;
                return 0.0;
            }
            return value;
        };
        auto converged = [](double x, double y) { return std::abs(x - y) <= kBracketTol; };
        std::uintmax_t max_iter = 200;
        const auto [lo, hi] =
            boost::math::tools::toms748_solve(f, a, z, fa, fz, converged, max_iter);
        if (!std::isnan(hit)) return {hit, hi - lo};
        return {0.5 * (lo + hi), hi - lo};
    }

    // The squared gap does not change sign across the bracket (for example
    // when tracking swapped partners); fall back to bisection on the phase.
    const bool broken_at_a = broken(tracker.at(a)[b], options.phase_tol);
    while (z - a > kBracketTol) {
        const double mid = 0.5 * (a + z);
        const auto& values = tracker.at(mid);
        const double f = pair_discriminant(values, b, c, options.phase_tol);
        if (std::sqrt(std::abs(f)) <= options.ep_tol) return {mid, z - a};
        if (broken(values[b], options.phase_tol) == broken_at_a) {
            a = mid;
        } else {
            z = mid;
        }
    }
    return {0.5 * (a + z), z - a};
}

struct PairCandidate {
    double cost;
    std::size_t b;
    std::size_t c;
};

/// Pairs branches that changed phase inside one coarse interval: each
/// branch is paired with the branch nearest its complex conjugate at the
/// broken end. Branches that coincide at the unbroken end are degenerate
/// copies rather than partners and are only paired as a last resort.
std::vector<std::pair<std::size_t, std::size_t>> pair_flipped_branches(
    const SweepResult& sweep, std::size_t k, const std::vector<std::size_t>& flipped,
    double phase_tol) {
    constexpr double kCopyPenalty = 1e6;
    std::vector<PairCandidate> candidates;
    for (std::size_t i = 0; i < flipped.size(); ++i) {
        const std::size_t b = flipped[i];
        const bool broken_lo = broken(sweep.branches[b][k], phase_tol);
        const std::size_t broken_end = broken_lo ? k : k + 1;
        const std::size_t unbroken_end = broken_lo ? k + 1 : k;
        for (std::size_t j = i + 1; j < flipped.size(); ++j) {
            const std::size_t c = flipped[j];
            if (broken(sweep.branches[c][k], phase_tol) != broken_lo) continue;
            const cplx vb = sweep.branches[b][broken_end];
            const cplx vc = sweep.branches[c][broken_end];
            double cost = std::abs(vb - std::conj(vc));
            const cplx ub = sweep.branches[b][unbroken_end];
            const cplx uc = sweep.branches[c][unbroken_end];
            if (std::abs(ub - uc) <= 1e-9 * (1.0 + std::abs(ub))) cost += kCopyPenalty;
            candidates.push_back({cost, b, c});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const auto& x, const auto& y) {
        if (x.cost != y.cost) return x.cost < y.cost;
        if (x.b != y.b) return x.b < y.b;
        return x.c < y.c;
    });
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::size_t> used;
    auto is_used = [&](std::size_t i) { return std::find(used.begin(), used.end(), i) != used.end(); };
    for (const auto& cand : candidates) {
        if (is_used(cand.b) || is_used(cand.c)) continue;
        pairs.emplace_back(std::min(cand.b, cand.c), std::max(cand.b, cand.c));
        used.push_back(cand.b);
        used.push_back(cand.c);
    }
    return pairs;
}

std::vector<NearDegeneracy> find_near_degeneracies(const SweepResult& sweep,
                                                   const EpSearchOptions& options) {
    std::vector<NearDegeneracy> out;
    const std::size_t n = sweep.branch_count();
    const std::size_t steps = sweep.gamma_grid.size();
    if (steps < 3) return out;
    std::vector<double> gap(steps);
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t c = b + 1; c < n; ++c) {
            for (std::size_t k = 0; k < steps; ++k) {
                gap[k] = std::abs(sweep.branches[b][k] - sweep.branches[c][k]);
            }
            for (std::size_t k = 1; k + 1 < steps; ++k) {
                if (!(gap[k] < gap[k - 1] && gap[k] < gap[k + 1])) continue;
                if (gap[k] > options.near_degeneracy_gap) continue;
                const double scale = 1.0 + std::abs(sweep.branches[b][k]);
                if (std::max(gap[k - 1], gap[k + 1]) <= 1e-9 * scale) continue;
                bool all_unbroken = true;
                for (std::size_t j = k - 1; j <= k + 1; ++j) {
                    all_unbroken = all_unbroken && !broken(sweep.branches[b][j], options.phase_tol) &&
                                   !broken(sweep.branches[c][j], options.phase_tol);
                }
                if (!all_unbroken) continue;
                out.push_back({sweep.gamma_grid[k], {b, c}, gap[k]});
            }
        }
    }
    return out;
}

}  // namespace

std::string_view to_string(EpKind kind) {
    return kind == EpKind::MergePoint ? "merge" : "split";
}

double self_orthogonality(const MatrixXc& matrix, cplx energy) {
    const Eigen::Index n = matrix.rows();
    const cplx shift = energy + cplx(1.0, 1.0) * (1e-10 * (1.0 + std::abs(energy)));
    MatrixXc shifted = matrix;
    shifted.diagonal().array() -= shift;
    Eigen::PartialPivLU<MatrixXc> lu(shifted);
    VectorXc v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = cplx(1.0 + 0.01 * static_cast<double>(i), 0.5 - 0.003 * static_cast<double>(i));
    }
    v.normalize();
    for (int it = 0; it < 6; ++it) {
        v = lu.solve(v);
        const double norm = v.norm();
        if (!std::isfinite(norm) || norm == 0.0) return kNaN;
        v /= norm;
    }
    const cplx bilinear = (v.transpose() * v)(0, 0);
    return std::abs(bilinear) / v.squaredNorm();
}

EpSearchResult locate_exceptional_points(const MatrixFamily& family, Interval range,
                                         int coarse_steps, const EpSearchOptions& options) {
    if (coarse_steps < 8) throw DomainError("coarse_steps must be at least 8");
    if (!(options.ep_tol > 0.0)) throw DomainError("ep_tol must be positive");
    if (!(options.phase_tol > 0.0)) throw DomainError("phase_tol must be positive");
    if (!(range.hi > range.lo)) throw DomainError("EP search range must have hi > lo");

    EpSearchResult out;
    const std::vector<double> grid = coarse_grid(range, coarse_steps);
    out.sweep = sweep_spectrum(family, grid, options.sweep);
    const SweepResult& sweep = out.sweep;
    const std::size_t n = sweep.branch_count();

    // Coarse intervals refine independently; results are concatenated in
    // grid order so the output does not depend on the worker count.
    struct IntervalOutcome {
        std::vector<ExceptionalPoint> points;
        std::vector<NearDegeneracy> near;
    };
    std::vector<IntervalOutcome> outcomes(grid.size() - 1);
    parallel_for(outcomes.size(), options.sweep.workers, [&](std::size_t k) {
        IntervalOutcome& here = outcomes[k];
        std::vector<std::size_t> flipped;
        for (std::size_t b = 0; b < n; ++b) {
            if (broken(sweep.branches[b][k], options.phase_tol) !=
                broken(sweep.branches[b][k + 1], options.phase_tol)) {
                flipped.push_back(b);
            }
        }
        if (flipped.empty()) return;

        IntervalTracker tracker(family, options.sweep);
        for (std::size_t j : {k, k + 1}) {
            std::vector<cplx> ordered(n);
            for (std::size_t b = 0; b < n; ++b) ordered[b] = sweep.branches[b][j];
            tracker.seed(grid[j], std::move(ordered));
        }

        for (const auto& [b, c] : pair_flipped_branches(sweep, k, flipped, options.phase_tol)) {
            const Refinement r = refine_pair(tracker, grid[k], grid[k + 1], b, c, options);
            const auto& values = tracker.at(r.gamma_star);
            const double gap =
                std::sqrt(std::abs(pair_discriminant(values, b, c, options.phase_tol)));
            if (!(gap <= options.max_pair_gap)) {
                // The bracket closed on a jump in the tracked pair, not on a
                // coalescence.
                here.near.push_back({r.gamma_star, {b, c}, gap});
                continue;
            }
            ExceptionalPoint ep;
            ep.gamma_star = r.gamma_star;
            const bool copies = std::abs(values[b] - values[c]) <= 1e-9 * (1.0 + std::abs(values[b]));
            ep.energy_star = copies ? values[b] : 0.5 * (values[b] + values[c]);
            ep.branch_pair = {b, c};
            ep.kind = broken(sweep.branches[b][k], options.phase_tol) ? EpKind::SplitPoint
                                                                      : EpKind::MergePoint;
            ep.pair_gap = gap;
            ep.bracket_width = r.bracket_width;
            ep.self_orthogonality =
                options.compute_self_orthogonality && family.matrix
                    ? self_orthogonality(family.matrix(ep.gamma_star), ep.energy_star)
                    : kNaN;
            here.points.push_back(ep);
        }
    }, 1);
    for (IntervalOutcome& o : outcomes) {
        out.points.insert(out.points.end(), o.points.begin(), o.points.end());
        out.near_degeneracies.insert(out.near_degeneracies.end(), o.near.begin(), o.near.end());
    }

    std::sort(out.points.begin(), out.points.end(), [](const auto& x, const auto& y) {
        if (x.gamma_star != y.gamma_star) return x.gamma_star < y.gamma_star;
        return x.branch_pair < y.branch_pair;
    });
    std::vector<NearDegeneracy> dips = find_near_degeneracies(sweep, options);
    out.near_degeneracies.insert(out.near_degeneracies.end(), dips.begin(), dips.end());
    std::sort(out.near_degeneracies.begin(), out.near_degeneracies.end(),
              [](const auto& x, const auto& y) { return x.gamma < y.gamma; });
    return out;
}

EpSearchResult locate_exceptional_points(const LatticeSpec& spec, Interval range,
                                         int coarse_steps, const EpSearchOptions& options) {
    return locate_exceptional_points(lattice_family(spec), range, coarse_steps, options);
}

std::vector<BrokenWindow> broken_windows(const std::vector<ExceptionalPoint>& points,
                                         double merge_tol) {
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].gamma_star < points[i - 1].gamma_star) {
            throw DomainError("broken_windows requires points sorted by gamma_star");
        }
    }
    std::vector<BrokenWindow> windows;
    std::vector<bool> used(points.size(), false);

    auto shares_branch = [](const auto& p, const auto& q) {
        return p.first == q.first || p.first == q.second || p.second == q.first ||
               p.second == q.second;
    };

    for (std::size_t i = 0; i < points.size(); ++i) {
        const ExceptionalPoint& open = points[i];
        if (open.kind != EpKind::MergePoint) continue;
        std::size_t close = points.size();
        for (std::size_t j = i + 1; j < points.size() && close == points.size(); ++j) {
            if (!used[j] && points[j].kind == EpKind::SplitPoint &&
                points[j].branch_pair == open.branch_pair) {
                close = j;
            }
        }
        for (std::size_t j = i + 1; j < points.size() && close == points.size(); ++j) {
            if (!used[j] && points[j].kind == EpKind::SplitPoint &&
                shares_branch(points[j].branch_pair, open.branch_pair)) {
                close = j;
            }
        }
        used[i] = true;
        BrokenWindow w;
        w.gamma_lo = open.gamma_star;
        w.energy = open.energy_star;
        w.branch_pairs.push_back(open.branch_pair);
        if (close < points.size()) {
            used[close] = true;
            w.gamma_hi = points[close].gamma_star;
        } else {
            w.gamma_hi = kInf;
            w.open_hi = true;
        }
        windows.push_back(w);
    }
    for (std::size_t j = 0; j < points.size(); ++j) {
        if (used[j]) continue;
        BrokenWindow w;
        w.gamma_lo = -kInf;
        w.open_lo = true;
        w.gamma_hi = points[j].gamma_star;
        w.energy = points[j].energy_star;
        w.branch_pairs.push_back(points[j].branch_pair);
        windows.push_back(w);
    }

    std::sort(windows.begin(), windows.end(), [](const auto& x, const auto& y) {
        if (x.gamma_lo != y.gamma_lo) return x.gamma_lo < y.gamma_lo;
        if (x.gamma_hi != y.gamma_hi) return x.gamma_hi < y.gamma_hi;
        return x.energy.real() < y.energy.real();
    });

    auto same_bound = [merge_tol](double x, double y) {
        return x == y || std::abs(x - y) <= merge_tol;
    };
    std::vector<BrokenWindow> merged;
    for (BrokenWindow& w : windows) {
        if (!merged.empty() && same_bound(merged.back().gamma_lo, w.gamma_lo) &&
            same_bound(merged.back().gamma_hi, w.gamma_hi)) {
            BrokenWindow& m = merged.back();
            m.multiplicity += 1;
            m.branch_pairs.insert(m.branch_pairs.end(), w.branch_pairs.begin(), w.branch_pairs.end());
            if (w.energy.real() < m.energy.real()) m.energy = w.energy;
            continue;
        }
        merged.push_back(std::move(w));
    }
    for (BrokenWindow& w : merged) w.width = w.gamma_hi - w.gamma_lo;
    return merged;
}

std::vector<EpCluster> cluster_exceptional_points(const std::vector<ExceptionalPoint>& points,
                                                  double tol) {
    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return points[x].gamma_star < points[y].gamma_star;
    });
    std::vector<EpCluster> clusters;
    double last = -kInf;
    for (std::size_t i : order) {
        const double g = points[i].gamma_star;
        if (clusters.empty() || g - last > tol) clusters.emplace_back();
        clusters.back().members.push_back(i);
        last = g;
    }
    for (EpCluster& cl : clusters) {
        double lo = kInf, hi = -kInf, sum = 0.0;
        for (std::size_t i : cl.members) {
            lo = std::min(lo, points[i].gamma_star);
            hi = std::max(hi, points[i].gamma_star);
            sum += points[i].gamma_star;
        }
        cl.gamma_center = sum / static_cast<double>(cl.members.size());
        cl.gamma_spread = hi - lo;
    }
    return clusters;
}

}  // namespace ptladder
