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

// Test-side reference computations. None of these call into the library;
// they use different algorithms (root finding on the characteristic
// polynomial, long-double elimination, closed forms) so that agreement is
// meaningful.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using cld = std::complex<long double>;
using cd = std::complex<double>;

/// Dense row-major square matrix in long double.
struct Dense {
    std::size_t n = 0;
    std::vector<cld> a;

    explicit Dense(std::size_t size = 0) : n(size), a(size * size, cld(0.0L, 0.0L)) {}
    cld& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    const cld& operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

/// Solves A X = B in place by Gaussian elimination with partial pivoting.
/// B is n x m row-major. Throws on an exactly singular pivot.
inline void solve_in_place(Dense a, std::vector<cld>& b, std::size_t m) {
    const std::size_t n = a.n;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        }
        if (std::abs(a(piv, col)) == 0.0L) throw std::runtime_error("oracle: singular matrix");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
            for (std::size_t j = 0; j < m; ++j) std::swap(b[col * m + j], b[piv * m + j]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const cld f = a(r, col) / a(col, col);
            if (f == cld(0.0L, 0.0L)) continue;
            for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
            for (std::size_t j = 0; j < m; ++j) b[r * m + j] -= f * b[col * m + j];
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        for (std::size_t j = 0; j < m; ++j) {
            cld s = b[col * m + j];
            for (std::size_t k = col + 1; k < n; ++k) s -= a(col, k) * b[k * m + j];
            b[col * m + j] = s / a(col, col);
        }
    }
}

/// trace((z I - A)^{-1}) = p'(z) / p(z) for the characteristic polynomial p.
inline cld log_derivative(const Dense& a, cld z) {
    Dense shifted(a.n);
    for (std::size_t i = 0; i < a.n; ++i) {
        for (std::size_t j = 0; j < a.n; ++j) shifted(i, j) = -a(i, j);
        shifted(i, i) += z;
    }
    std::vector<cld> inv(a.n * a.n, cld(0.0L, 0.0L));
    for (std::size_t i = 0; i < a.n; ++i) inv[i * a.n + i] = 1.0L;
    solve_in_place(shifted, inv, a.n);
    cld tr(0.0L, 0.0L);
    for (std::size_t i = 0; i < a.n; ++i) tr += inv[i * a.n + i];
    return tr;
}

/// All eigenvalues as roots of the characteristic polynomial, found by the
/// Aberth-Ehrlich simultaneous iteration. The Newton ratio p/p' comes from
/// the trace of the resolvent, so no polynomial coefficients are formed.
inline std::vector<cd> aberth_eigenvalues(const Dense& a, int max_iter = 500,
                                          long double tol = 1e-14L) {
    const std::size_t n = a.n;
    long double radius = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        long double row = 0.0L;
        for (std::size_t j = 0; j < n; ++j) row += std::abs(a(i, j));
        radius = std::max(radius, row);
    }
    cld center(0.0L, 0.0L);
    for (std::size_t i = 0; i < n; ++i) center += a(i, i);
    center /= static_cast<long double>(n);

    std::vector<cld> z(n);
    const long double pi = std::numbers::pi_v<long double>;
    for (std::size_t k = 0; k < n; ++k) {
        const long double angle = 2.0L * pi * (k + 0.25L) / n + 0.4L;
        z[k] = center + 0.5L * radius * cld(std::cos(angle), std::sin(angle));
    }
    for (int it = 0; it < max_iter; ++it) {
        long double max_step = 0.0L;
        for (std::size_t k = 0; k < n; ++k) {
            cld ld;
            try {
                ld = log_derivative(a, z[k]);
            } catch (const std::runtime_error&) {
                continue;  // z[k] is an exact eigenvalue
            }
            const cld newton = 1.0L / ld;
            cld repulsion(0.0L, 0.0L);
            for (std::size_t j = 0; j < n; ++j) {
                if (j != k) repulsion += 1.0L / (z[k] - z[j]);
            }
            const cld step = newton / (1.0L - newton * repulsion);
            z[k] -= step;
            max_step = std::max(max_step, std::abs(step) / (1.0L + std::abs(z[k])));
        }
        if (max_step < tol) break;
    }
    std::vector<cd> out;
    out.reserve(n);
    for (const cld& v : z) out.emplace_back(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    return out;
}

/// Largest distance after optimal pairing of two small multisets (exhaustive
/// greedy over sorted candidate pairs, then a 2-opt improvement pass).
inline double multiset_distance(std::vector<cd> a, std::vector<cd> b) {
    if (a.size() != b.size()) return INFINITY;
    const std::size_t n = a.size();
    std::vector<std::size_t> perm(n);
    std::vector<char> used(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double best = INFINITY;
        std::size_t pick = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (!used[j] && std::abs(a[i] - b[j]) < best) {
                best = std::abs(a[i] - b[j]);
                pick = j;
            }
        }
        used[pick] = 1;
        perm[i] = pick;
    }
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double now = std::max(std::abs(a[i] - b[perm[i]]), std::abs(a[j] - b[perm[j]]));
                const double swapped =
                    std::max(std::abs(a[i] - b[perm[j]]), std::abs(a[j] - b[perm[i]]));
                if (swapped < now) {
                    std::swap(perm[i], perm[j]);
                    improved = true;
                }
            }
        }
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
    return worst;
}

/// Roots of the 2x2 characteristic polynomial x^2 - tr x + det by the
/// quadratic formula.
inline std::pair<cd, cd> quadratic_eigenvalues(cd m00, cd m01, cd m10, cd m11) {
    const cd tr = m00 + m11;
    const cd det = m00 * m11 - m01 * m10;
    const cd disc = std::sqrt(tr * tr - 4.0 * det);
    return {(tr + disc) / 2.0, (tr - disc) / 2.0};
}

/// Levels of an open uniform chain with on-site `onsite` and hopping `hop`
/// (matrix element), computed from the closed form onsite + 2 hop cos(m pi/(N+1)).
inline std::vector<double> open_chain_spectrum(int n, double onsite, double hop) {
    std::vector<double> out;
    for (int m = 1; m <= n; ++m) {
        out.push_back(onsite + 2.0 * hop * std::cos(m * std::numbers::pi / (n + 1)));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Ladder parameters for the oracle Hamiltonian. `twist` is the zero-based
/// cell on the left of the crossed bond, or -1 for none. `closure` is 0 for
/// open, 1 for parallel closure and 2 for crossed closure.
struct LadderParams {
    int cells = 2;
    double d = 1.0;
    double t = 1.0;
    double delta = 0.0;
    double gamma = 0.0;
    int twist = -1;
    int closure = 0;
};

/// Site-by-site assembly: upper leg a_n at index 2n, lower leg b_n at 2n+1.
inline Dense ladder_hamiltonian(const LadderParams& p) {
    const std::size_t n = static_cast<std::size_t>(p.cells);
    Dense h(2 * n);
    const cld up(p.delta / 2.0L, p.gamma / 2.0L);
    auto bond = [&](std::size_t i, std::size_t j, long double v) {
        h(i, j) += v;
        h(j, i) += v;
    };
    for (std::size_t c = 0; c < n; ++c) {
        h(2 * c, 2 * c) = up;
        h(2 * c + 1, 2 * c + 1) = -up;
        bond(2 * c, 2 * c + 1, -p.d);
    }
    auto link = [&](std::size_t left, std::size_t right, bool crossed) {
        if (crossed) {
            bond(2 * left, 2 * right + 1, -p.t);
            bond(2 * left + 1, 2 * right, -p.t);
        } else {
            bond(2 * left, 2 * right, -p.t);
            bond(2 * left + 1, 2 * right + 1, -p.t);
        }
    };
    for (std::size_t c = 0; c + 1 < n; ++c) link(c, c + 1, static_cast<int>(c) == p.twist);
    if (p.closure != 0) link(n - 1, 0, p.closure == 2);
    return h;
}

/// Transmission and reflection from the bordered scattering equations,
/// assembled independently and solved in long double. Couplings are the
/// lead-to-site hoppings of the upper and lower legs.
struct OracleScattering {
    cd r;
    cd t;
};

inline OracleScattering scattering(const LadderParams& p, double energy, double v0, double gui,
                                   double gdi, double guo, double gdo) {
    const std::size_t n = static_cast<std::size_t>(p.cells);
    const std::size_t dim = 2 * n + 2;
    const long double x = energy / v0;
    // Lead plane wave e^{iq}: -v0 cos q = E.
    const cld e_iq(-x, std::sqrt(1.0L - x * x));
    const cld e_miq = 1.0L / e_iq;
    const Dense h = ladder_hamiltonian(p);
    const long double gin[2] = {-gui, -gdi};
    const long double gout[2] = {-guo, -gdo};

    Dense a(dim);
    std::vector<cld> b(dim, cld(0.0L, 0.0L));
    const long double half = v0 / 2.0L;
    a(0, 0) = half;
    a(0, 1) = gin[0];
    a(0, 2) = gin[1];
    b[0] = -half;
    for (std::size_t i = 0; i < 2 * n; ++i) {
        for (std::size_t j = 0; j < 2 * n; ++j) a(1 + i, 1 + j) = h(i, j);
        a(1 + i, 1 + i) -= energy;
    }
    for (int leg = 0; leg < 2; ++leg) {
        a(1 + leg, 0) = e_iq * gin[leg];
        b[1 + leg] = -e_miq * gin[leg];
        a(dim - 3 + leg, dim - 1) = e_iq * gout[leg];
        a(dim - 1, dim - 3 + leg) = gout[leg];
    }
    a(dim - 1, dim - 1) = half;
    solve_in_place(a, b, 1);
    return {cd(static_cast<double>(b[0].real()), static_cast<double>(b[0].imag())),
            cd(static_cast<double>(b[dim - 1].real()), static_cast<double>(b[dim - 1].imag()))};
}

/// Random complex-symmetric matrix with standard normal real and imaginary parts.
inline Dense random_complex_symmetric(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Dense m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const cld v(g(rng), g(rng));
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return m;
}

}  // namespace oracle
