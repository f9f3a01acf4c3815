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
#include <numbers>

#include "oracles.hpp"
#include "ptladder/errors.hpp"
#include "ptladder/transport_maps.hpp"

using namespace ptladder;

namespace {

LatticeSpec open_spec(Topology topology, int n, double gamma = 0.0) {
    LatticeSpec s;
    s.topology = topology;
    s.n_cells = n;
    s.gamma = gamma;
    return s;
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
    return v;
}

}  // namespace

TEST(Map, ShapeAndRowMajorCells) {
    const std::vector<double> e{-1.0, 0.3, 1.5};
    const std::vector<double> g{0.0, 0.7};
    const TransmissionMap m = transmission_map(open_spec(Topology::OpenLadder, 8), LeadSpec{}, e, g);
    ASSERT_EQ(m.t_values.rows(), 3);
    ASSERT_EQ(m.t_values.cols(), 2);
    for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 2; ++j) {
            const auto r = scatter(open_spec(Topology::OpenLadder, 8, g[static_cast<std::size_t>(j)]), LeadSpec{},
                                   e[static_cast<std::size_t>(i)]);
            EXPECT_EQ(m.t_values(i, j), r.transmission_prob);
            EXPECT_EQ(m.r_values(i, j), r.reflection_prob);
            EXPECT_GE(m.t_values(i, j), 0.0);
        }
    }
    EXPECT_EQ(m.failed_cells, 0u);
}

TEST(Map, SingleCell) {
    const TransmissionMap m = transmission_map(open_spec(Topology::OpenLadder, 100), LeadSpec{}, {0.0}, {0.0});
    EXPECT_EQ(m.t_values.size(), 1);
    EXPECT_NEAR(m.t_values(0, 0), 0.390243902439024, 1e-12);
}

TEST(Map, SymmetricContactsSeeOnlyTheBondingBand) {
    // Equal couplings on both legs address the bonding chain only, so the
    // Hermitian ladder is opaque above its band edge at 1.
    const std::vector<double> e = linspace(-3.5, 3.5, 141);
    const TransmissionMap m = transmission_map(open_spec(Topology::OpenLadder, 100), LeadSpec{}, e, {0.0});
    for (Eigen::Index i = 0; i < 141; ++i) {
        const double energy = e[static_cast<std::size_t>(i)];
        if (energy > 1.1) {
            EXPECT_LT(m.t_values(i, 0), 1e-6) << energy;
        }
    }
    EXPECT_GT(m.t_values.col(0).maxCoeff(), 0.99);
}

TEST(Map, BrokenPhaseColumnIsSuppressed) {
    const std::vector<double> e = linspace(-4.0, 4.0, 201);
    const TransmissionMap m =
        transmission_map(open_spec(Topology::OpenLadder, 100), LeadSpec{}, e, {0.0, 2.5});
    EXPECT_LT(m.t_values.col(1).maxCoeff(), m.t_values.col(0).maxCoeff());
}

TEST(Map, WorkerCountDoesNotChangeValues) {
    const std::vector<double> e = linspace(-2.0, 2.0, 13);
    const std::vector<double> g = linspace(0.0, 3.0, 11);
    const LatticeSpec s = open_spec(Topology::TwistedOpen, 20);
    const TransmissionMap a = transmission_map(s, LeadSpec{}, e, g, 1);
    const TransmissionMap b = transmission_map(s, LeadSpec{}, e, g, 3);
    // Bound states in the continuum give NaN cells; those must agree too.
    EXPECT_EQ(a.failed_cells, b.failed_cells);
    for (Eigen::Index i = 0; i < a.t_values.size(); ++i) {
        const double x = a.t_values.data()[i], y = b.t_values.data()[i];
        EXPECT_TRUE(x == y || (std::isnan(x) && std::isnan(y))) << i;
    }
}

TEST(Map, Preconditions) {
    const LatticeSpec s = open_spec(Topology::OpenLadder, 4);
    EXPECT_THROW(transmission_map(s, LeadSpec{}, {}, {0.0}), DomainError);
    EXPECT_THROW(transmission_map(s, LeadSpec{}, {0.0, 11.0}, {0.0}), DomainError);
    EXPECT_THROW(transmission_map(open_spec(Topology::MoebiusPeriodic, 4), LeadSpec{}, {0.0}, {0.0}), DomainError);
}

TEST(Extrema, InteriorOnly) {
    const std::vector<double> v{3.0, 1.0, 2.0, 2.0, 0.5, 4.0};
    EXPECT_EQ(local_maxima(v), (std::vector<std::size_t>{3}));
    EXPECT_EQ(local_minima(v), (std::vector<std::size_t>{1, 4}));
    EXPECT_TRUE(local_maxima({1.0, 2.0}).empty());
}

TEST(ChainLevels, ClosedForm) {
    const auto levels = open_chain_levels(10, 1.0, 1.0);
    const auto ref = oracle::open_chain_spectrum(10, 1.0, -1.0);
    ASSERT_EQ(levels.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(levels[i], ref[i], 1e-15);
}

TEST(Trace, UntwistedDecaysBeforeThreshold) {
    TraceOptions opts;
    const ZeroEnergyTrace t =
        zero_energy_trace(open_spec(Topology::OpenLadder, 100), LeadSpec{}, linspace(0.0, 1.995, 400), opts);
    EXPECT_TRUE(t.zero_energy_eps.empty());
    EXPECT_LT(t.transmission.back(), 0.1);
}

TEST(Trace, TwistedHasNearPerfectPeaksAtEps) {
    TraceOptions opts;
    opts.ep_coarse_steps = 200;
    const ZeroEnergyTrace t =
        zero_energy_trace(open_spec(Topology::TwistedOpen, 20), LeadSpec{}, linspace(0.0, 1.995, 400), opts);
    ASSERT_FALSE(t.ep_matches.empty());
    bool perfect = false;
    for (const EpPeakMatch& m : t.ep_matches) perfect |= m.within_one_step && m.peak_transmission >= 0.99;
    EXPECT_TRUE(perfect);
}

TEST(Detangled, SymmetricContactsShowPResonances) {
    const DetangledTransportCheck c =
        detangled_transport_check(open_spec(Topology::OpenLadder, 10), LeadSpec{}, linspace(-3.5, 3.5, 1401));
    EXPECT_EQ(c.contact, ContactMode::Symmetric);
    std::size_t p_levels = 0;
    for (const LevelAlignment& a : c.levels) p_levels += a.chain == ChainKind::P ? 1 : 0;
    EXPECT_EQ(p_levels, 10u);
}

TEST(Detangled, LowerLegContactHasNoDeepDips) {
    LeadSpec leads;
    leads.gamma_u_in = 0.0;
    leads.gamma_u_out = 0.0;
    const DetangledTransportCheck c =
        detangled_transport_check(open_spec(Topology::OpenLadder, 10), leads, linspace(-3.5, 3.5, 1401));
    EXPECT_EQ(c.contact, ContactMode::LowerOnly);
    EXPECT_EQ(c.deep_f_dips, 0u);
}

TEST(Detangled, Preconditions) {
    LeadSpec skew;
    skew.gamma_u_in = 0.3;
    const auto e = linspace(-1.0, 1.0, 5);
    EXPECT_THROW(detangled_transport_check(open_spec(Topology::OpenLadder, 10), skew, e), DomainError);
    EXPECT_THROW(detangled_transport_check(open_spec(Topology::TwistedOpen, 10), LeadSpec{}, e), DomainError);
    EXPECT_THROW(detangled_transport_check(open_spec(Topology::OpenLadder, 10), LeadSpec{}, {0.0, 1.0}), DomainError);
}
