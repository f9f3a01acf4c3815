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

#include <algorithm>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "ptladder/lattice.hpp"
#include "ptladder/transport.hpp"

namespace testing_support {

inline oracle::Dense to_dense(const ptladder::MatrixXc& m) {
    oracle::Dense d(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            d(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                oracle::cld(m(i, j).real(), m(i, j).imag());
        }
    }
    return d;
}

inline ptladder::MatrixXc to_eigen(const oracle::Dense& d) {
    ptladder::MatrixXc m(static_cast<Eigen::Index>(d.n), static_cast<Eigen::Index>(d.n));
    for (std::size_t i = 0; i < d.n; ++i) {
        for (std::size_t j = 0; j < d.n; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::complex<double>(static_cast<double>(d(i, j).real()),
                                     static_cast<double>(d(i, j).imag()));
        }
    }
    return m;
}

inline oracle::LadderParams oracle_params(const ptladder::LatticeSpec& s) {
    oracle::LadderParams p;
    p.cells = s.n_cells;
    p.d = s.intra_hop;
    p.t = s.inter_hop;
    p.delta = s.delta;
    p.gamma = s.gamma;
    switch (s.topology) {
        case ptladder::Topology::CircularPeriodic: p.closure = 1; break;
        case ptladder::Topology::MoebiusPeriodic: p.closure = 2; break;
        case ptladder::Topology::OpenLadder: break;
        case ptladder::Topology::TwistedOpen: p.twist = s.n_cells / 2 - 1; break;
    }
    return p;
}

/// Seeded generators for property tests. Every draw is reproducible from the
/// seed printed by the test on failure.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }

    ptladder::Topology topology() {
        static const ptladder::Topology all[] = {
            ptladder::Topology::CircularPeriodic, ptladder::Topology::MoebiusPeriodic,
            ptladder::Topology::OpenLadder, ptladder::Topology::TwistedOpen};
        return all[integer(0, 3)];
    }

    /// Valid lattice with small size. Even cell counts for twisted topologies.
    ptladder::LatticeSpec lattice(int max_cells = 24, bool pt_symmetric = false) {
        ptladder::LatticeSpec s;
        s.topology = topology();
        s.n_cells = integer(2, max_cells);
        if (ptladder::is_twisted(s.topology) && s.n_cells % 2 == 1) ++s.n_cells;
        s.intra_hop = uniform(0.3, 2.0) * (coin() ? 1.0 : -1.0);
        s.inter_hop = uniform(0.3, 2.0);
        s.delta = pt_symmetric ? 0.0 : uniform(-1.0, 1.0);
        s.gamma = uniform(0.0, 4.0);
        return s;
    }

    ptladder::LatticeSpec open_lattice(int max_cells = 24) {
        ptladder::LatticeSpec s = lattice(max_cells);
        s.topology = coin() ? ptladder::Topology::OpenLadder : ptladder::Topology::TwistedOpen;
        if (s.n_cells % 2 == 1) ++s.n_cells;
        return s;
    }

    ptladder::LeadSpec leads() {
        ptladder::LeadSpec l;
        l.v0 = uniform(4.0, 12.0);
        l.gamma_u_in = uniform(0.2, 1.5);
        l.gamma_d_in = uniform(0.2, 1.5);
        l.gamma_u_out = uniform(0.2, 1.5);
        l.gamma_d_out = uniform(0.2, 1.5);
        return l;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline std::vector<std::complex<double>> sorted(std::vector<std::complex<double>> v) {
    std::sort(v.begin(), v.end(), [](auto a, auto b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return v;
}

}  // namespace testing_support
