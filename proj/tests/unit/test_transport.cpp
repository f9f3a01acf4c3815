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

#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "ptladder/errors.hpp"
#include "ptladder/transport.hpp"

using namespace ptladder;

namespace {

LatticeSpec open_spec(Topology topology, int n, double gamma = 0.0) {
    LatticeSpec s;
    s.topology = topology;
    s.n_cells = n;
    s.gamma = gamma;
    return s;
}

}  // namespace

TEST(LeadMomentum, BandCentre) {
    const auto [plus, minus] = lead_momentum(0.0, 10.0);
    EXPECT_EQ(plus, cplx(0.0, 1.0));
    EXPECT_EQ(minus, cplx(0.0, -1.0));
}

TEST(LeadMomentum, HalfBand) {
    const auto [plus, minus] = lead_momentum(5.0, 10.0);
    EXPECT_NEAR(std::abs(plus - cplx(-0.5, std::sqrt(0.75))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(minus - cplx(-0.5, -std::sqrt(0.75))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(plus), 1.0, 1e-14);
}

TEST(LeadMomentum, BandEdgeIsOutOfRange) {
    EXPECT_THROW(lead_momentum(10.0, 10.0), DomainError);
    EXPECT_THROW(lead_momentum(-12.0, 10.0), DomainError);
    EXPECT_THROW(lead_momentum(0.0, 0.0), DomainError);
}

TEST(Assembly, SingleCellByHand) {
    const ScatteringSystem s = assemble_scattering_system(open_spec(Topology::OpenLadder, 1), LeadSpec{}, 0.0);
    const cplx i(0.0, 1.0);
    Eigen::Matrix4cd expected;
    expected << 5.0, -1.0, -1.0, 0.0,
                -i, 0.0, -1.0, -i,
                -i, -1.0, 0.0, -i,
                0.0, -1.0, -1.0, 5.0;
    EXPECT_EQ(s.dimension(), 4);
    EXPECT_LE((s.dense_matrix() - expected).norm(), 0.0);
    Eigen::Vector4cd rhs;
    rhs << -5.0, -i, -i, 0.0;
    EXPECT_LE((s.rhs() - rhs).norm(), 0.0);
}

TEST(Assembly, BandedStructure) {
    const ScatteringSystem s = assemble_scattering_system(open_spec(Topology::OpenLadder, 5), LeadSpec{}, 0.3);
    const MatrixXc a = s.dense_matrix();
    for (Eigen::Index i = 1; i < a.rows() - 1; ++i) {
        for (Eigen::Index j = 1; j < a.cols() - 1; ++j) {
            const Eigen::Index ci = (i - 1) / 2, cj = (j - 1) / 2;
            if (std::abs(ci - cj) > 1) {
                EXPECT_EQ(a(i, j), cplx(0.0, 0.0));
            }
        }
    }
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            EXPECT_EQ(a(i, j) == cplx(0.0, 0.0), a(j, i) == cplx(0.0, 0.0));
        }
    }
}

TEST(Assembly, TwistReplacesMiddleBond) {
    const ScatteringSystem s = assemble_scattering_system(open_spec(Topology::TwistedOpen, 6), LeadSpec{}, 0.0);
    EXPECT_EQ(s.upper[2](0, 1), cplx(-1.0, 0.0));
    EXPECT_EQ(s.upper[2](0, 0), cplx(0.0, 0.0));
    EXPECT_EQ(s.upper[1](0, 0), cplx(-1.0, 0.0));
}

TEST(Assembly, ApplyMatchesDenseProduct) {
    const ScatteringSystem s = assemble_scattering_system(open_spec(Topology::TwistedOpen, 8, 0.7), LeadSpec{}, -1.3);
    const VectorXc x = VectorXc::LinSpaced(s.dimension(), 0.0, 1.0) * cplx(1.0, 0.5);
    EXPECT_LE((s.apply(x) - s.dense_matrix() * x).norm(), 1e-13);
}

TEST(Assembly, Preconditions) {
    EXPECT_THROW(assemble_scattering_system(open_spec(Topology::CircularPeriodic, 4), LeadSpec{}, 0.0), DomainError);
    EXPECT_THROW(assemble_scattering_system(open_spec(Topology::OpenLadder, 4), LeadSpec{}, 10.5), DomainError);
    EXPECT_THROW(assemble_scattering_system(open_spec(Topology::TwistedOpen, 5), LeadSpec{}, 0.0), DomainError);
    LeadSpec bad;
    bad.v0 = -1.0;
    EXPECT_THROW(assemble_scattering_system(open_spec(Topology::OpenLadder, 4), bad, 0.0), DomainError);
}

TEST(Solve, SingleCellConservesFlux) {
    const ScatteringResult r = scatter(open_spec(Topology::OpenLadder, 1), LeadSpec{}, 0.0);
    EXPECT_NEAR(r.reflection_prob + r.transmission_prob, 1.0, 1e-12);
    EXPECT_LE(r.residual, 1e-12);
}

TEST(Solve, MatchesLongDoubleOracle) {
    for (Topology topo : {Topology::OpenLadder, Topology::TwistedOpen}) {
        for (double gamma : {0.0, 0.8, 2.5}) {
            for (double e : {-3.1, -0.2, 0.0, 1.7}) {
                const LatticeSpec spec = open_spec(topo, 12, gamma);
                LeadSpec leads;
                leads.gamma_u_in = 0.7;
                leads.gamma_d_out = 1.3;
                const ScatteringResult r = scatter(spec, leads, e);
                const oracle::OracleScattering o = oracle::scattering(
                    testing_support::oracle_params(spec), e, leads.v0, leads.gamma_u_in, leads.gamma_d_in,
                    leads.gamma_u_out, leads.gamma_d_out);
                EXPECT_LE(std::abs(r.r - o.r), 1e-10) << to_string(topo) << " g=" << gamma << " E=" << e;
                EXPECT_LE(std::abs(r.t - o.t), 1e-10) << to_string(topo) << " g=" << gamma << " E=" << e;
            }
        }
    }
}

TEST(Solve, BandedAgreesWithDense) {
    const ScatteringSystem s = assemble_scattering_system(open_spec(Topology::TwistedOpen, 40, 1.2), LeadSpec{}, 0.4);
    const ScatteringResult a = solve_scattering(s);
    const ScatteringResult b = solve_scattering_dense(s);
    EXPECT_LE(std::abs(a.t - b.t), 1e-9);
    EXPECT_LE(std::abs(a.r - b.r), 1e-9);
    EXPECT_LE(a.residual, 1e-9);
    EXPECT_FALSE(b.used_dense_fallback);
}

TEST(Solve, HermitianFluxConservation) {
    for (Topology topo : {Topology::OpenLadder, Topology::TwistedOpen}) {
        for (double e = -3.9; e <= 3.9; e += 0.3) {
            const ScatteringResult r = scatter(open_spec(topo, 30), LeadSpec{}, e);
            EXPECT_LE(std::abs(r.flux_residual), 1e-10) << to_string(topo) << " E=" << e;
        }
    }
}

TEST(Solve, ReciprocityUnderLeadSwap) {
    LeadSpec leads;
    for (double gamma : {0.0, 0.9, 2.4}) {
        for (double e : {-1.1, 0.0, 2.2}) {
            const LatticeSpec spec = open_spec(Topology::TwistedOpen, 16, gamma);
            const double t1 = scatter(spec, leads, e).transmission_prob;
            const double t2 = scatter(spec, leads.swapped(), e).transmission_prob;
            EXPECT_NEAR(t1, t2, 1e-10);
        }
    }
}

TEST(Solve, PChainLevelGivesTransmissionPeak) {
    // Resonance at the lowest p-chain level of the 100-cell ladder.
    const LatticeSpec spec = open_spec(Topology::OpenLadder, 100);
    const double level = -1.0 - 2.0 * std::cos(std::numbers::pi / 101.0);
    const double at = scatter(spec, LeadSpec{}, level).transmission_prob;
    const double h = 2e-4;
    EXPECT_GT(at, scatter(spec, LeadSpec{}, level - h).transmission_prob);
    EXPECT_GT(at, scatter(spec, LeadSpec{}, level + h).transmission_prob);
}

TEST(LeadSpecTest, Helpers) {
    LeadSpec l;
    EXPECT_TRUE(l.symmetric());
    l.gamma_u_in = 0.5;
    EXPECT_FALSE(l.symmetric());
    const LeadSpec s = l.swapped();
    EXPECT_EQ(s.gamma_u_out, 0.5);
    EXPECT_EQ(l.input_coupling(), Eigen::Vector2d(-0.5, -1.0));
}
