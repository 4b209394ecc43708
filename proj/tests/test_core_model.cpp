#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gamow/initial_state.hpp"
#include "gamow/pole_finder.hpp"
#include "gamow/potential.hpp"
#include "gamow/quadrature.hpp"
#include "gamow/units.hpp"

using namespace gamow;

TEST(PhysicalSetup, KineticScaleIsBareScaleOverMass) {
    const PhysicalSetup s(0.067);
    EXPECT_EQ(s.kinetic_scale(), hbar2_over_2me / 0.067);
    EXPECT_DOUBLE_EQ(s.hbar(), 0.6582119569);
    EXPECT_DOUBLE_EQ(s.hbar_over_2m(), s.kinetic_scale() / s.hbar());
}

TEST(PhysicalSetup, RejectsNonPositiveMass) {
    EXPECT_THROW(PhysicalSetup(0.0), InvalidSpec);
    EXPECT_THROW(PhysicalSetup(-1.0), InvalidSpec);
}

TEST(ComplexEnergy, MatchesPoleRecordBitForBit) {
    const PhysicalSetup s(0.067);
    const cplx k{0.4, -0.05};
    const auto e = complex_energy(k, s);
    EXPECT_EQ(e.epsilon, s.kinetic_scale() * (0.4 * 0.4 - 0.05 * 0.05));
    EXPECT_EQ(e.gamma, s.kinetic_scale() * 4.0 * 0.4 * 0.05);
    const auto p = make_pole(1, k, 0.0, s);
    EXPECT_EQ(p.energy.epsilon, e.epsilon);
    EXPECT_EQ(p.energy.gamma, e.gamma);
}

TEST(DoubleBarrier, Fig1Geometry) {
    const auto v = build_double_barrier({2.5, 6.2, 1.36});
    EXPECT_DOUBLE_EQ(v.length(), 11.2);
    ASSERT_EQ(v.segment_count(), 3u);
    EXPECT_EQ(v.height(0), 1.36);
    EXPECT_EQ(v.height(1), 0.0);
    EXPECT_EQ(v.height(2), 1.36);
    EXPECT_EQ(v(-0.1), 0.0);
    EXPECT_EQ(v(11.3), 0.0);
}

TEST(DoubleBarrier, Fig3Length) { EXPECT_DOUBLE_EQ(build_double_barrier({1.0, 1.5, 0.23}).length(), 3.5); }

TEST(DoubleBarrier, RejectsDegenerateGeometry) {
    EXPECT_THROW(build_double_barrier({1.0, 0.0, 0.23}), InvalidSpec);
    EXPECT_THROW(build_double_barrier({0.0, 1.0, 0.23}), InvalidSpec);
    EXPECT_THROW(build_double_barrier({1.0, 1.0, -0.1}), InvalidSpec);
}

TEST(DoubleBarrier, SymmetricOnGridNodes) {
    const auto v = build_double_barrier({2.5, 6.2, 1.36});
    const auto grid = build_quadrature_grid(v);
    for (double x : grid.nodes) {
        const double mirrored = v.length() - x;
        // Nodes on a breakpoint sit on the boundary of two segments; skip those.
        bool on_break = false;
        for (double b : v.breakpoints()) on_break |= std::abs(x - b) < 1e-12;
        if (!on_break) {
            EXPECT_EQ(v(x), v(mirrored)) << "x = " << x;
        }
    }
}

TEST(PiecewisePotential, ValidatesBreakpoints) {
    EXPECT_THROW(PiecewisePotential({0.0, 1.0}, {}), InvalidSpec);
    EXPECT_THROW(PiecewisePotential({0.5, 1.0}, {1.0}), InvalidSpec);
    EXPECT_THROW(PiecewisePotential({0.0, 1.0, 1.0}, {1.0, 2.0}), InvalidSpec);
    EXPECT_THROW(PiecewisePotential({0.0, 1.0}, {NAN}), InvalidSpec);
}

TEST(QuadratureGrid, ContainsBreakpointsAndIntegratesPolynomialsExactly) {
    const auto v = build_double_barrier({1.0, 1.5, 0.23});
    const auto g = build_quadrature_grid(v);
    for (double b : v.breakpoints())
        EXPECT_NE(std::find(g.nodes.begin(), g.nodes.end(), b), g.nodes.end()) << b;
    const cplx cubic = integrate(g, [&](std::size_t i) { return cplx{g.nodes[i] * g.nodes[i] * g.nodes[i]}; });
    EXPECT_NEAR(cubic.real(), std::pow(3.5, 4) / 4.0, 1e-12);
}

TEST(BoxState, UnitNormAndNodesAtWalls) {
    const DoubleBarrierSpec spec{2.5, 6.2, 1.36};
    const auto psi = make_box_initial_state(spec);
    EXPECT_NEAR(psi.quadrature_norm(), 1.0, 1e-10);
    EXPECT_EQ(psi(2.5), cplx{});
    EXPECT_EQ(psi(8.7), cplx{});
    EXPECT_NEAR(psi(2.5 + 3.1).real(), std::sqrt(2.0 / 6.2), 1e-8);
    EXPECT_TRUE(psi.is_real());
    EXPECT_EQ(psi.kind(), InitialStateKind::box_eigenstate);
}

TEST(BoxState, ZeroOnBarriers) {
    const DoubleBarrierSpec spec{1.0, 5.0, 0.23};
    const auto psi = make_box_initial_state(spec);
    for (std::size_t i = 0; i < psi.grid().size(); ++i) {
        const double x = psi.grid().nodes[i];
        if (x <= 1.0 || x >= 6.0) {
            EXPECT_EQ(psi.samples()[i], cplx{});
        }
    }
}

TEST(BoxState, MomentumIsPiOverWidth) {
    const auto psi = make_box_initial_state({2.5, 6.2, 1.36});
    ASSERT_TRUE(psi.analytic().has_value());
    EXPECT_NEAR(psi.analytic()->segments()[1].q.real(), 0.5067, 1e-4);
}

TEST(BoxState, CoarseGridIsAResolutionError) {
    EXPECT_THROW(make_box_initial_state({1.0, 5.0, 0.23}, 5.0), ResolutionError);
}

TEST(SampledState, NormalizedOnGrid) {
    const auto v = build_double_barrier({1.0, 5.0, 0.23});
    const auto g = build_quadrature_grid(v);
    const auto psi = make_sampled_initial_state(g, [](double x) { return cplx{std::exp(-(x - 3.5) * (x - 3.5)), 0.3}; });
    EXPECT_NEAR(psi.quadrature_norm(), 1.0, 1e-10);
    EXPECT_FALSE(psi.is_real());
}
