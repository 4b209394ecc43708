#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gamow/pole_finder.hpp"
#include "scenarios.hpp"

using namespace gamow;
using fixture::Case;

namespace {

// First poles from an independent numpy prototype (shooting + Newton), frozen.
struct Frozen {
    Case c;
    cplx k1;
};
const Frozen frozen[] = {{Case::fig1, {0.418276133, -4.20796109e-05}},
                         {Case::fig2, {0.325625978, -0.0828881883}},
                         {Case::fig3, {0.498656334, -0.352968579}}};

}  // namespace

TEST(ScanPoles, FirstPolesMatchIndependentPrototype) {
    for (const auto& f : frozen) {
        const auto& s = fixture::scenario(f.c);
        EXPECT_NEAR(s.poles.front().k.real(), f.k1.real(), 1e-8) << fixture::name(f.c);
        EXPECT_NEAR(s.poles.front().k.imag(), f.k1.imag(), 1e-7 * std::abs(f.k1.imag()))
            << fixture::name(f.c);
    }
}

TEST(ScanPoles, WindingAuditMatchesPoleCount) {
    for (Case c : fixture::all_cases) {
        const auto v = build_double_barrier(fixture::spec(c));
        const double w = characteristic_well_width(v);
        const auto scan = scan_poles(v, fixture::setup(), default_scan_region(w), 100, default_cell_size(w));
        EXPECT_EQ(scan.winding_total, static_cast<int>(scan.poles.size())) << fixture::name(c);
        EXPECT_FALSE(scan.poles.empty());
    }
}

TEST(ScanPoles, TruncationWarns) {
    const auto v = build_double_barrier(fixture::spec(Case::fig2));
    const double w = characteristic_well_width(v);
    const auto scan = scan_poles(v, fixture::setup(), default_scan_region(w), 2, default_cell_size(w));
    EXPECT_TRUE(scan.truncated);
    EXPECT_EQ(scan.poles.size(), 2u);
    EXPECT_FALSE(scan.warnings.empty());
}

TEST(ScanPoles, RejectsRegionTouchingRealAxis) {
    const auto v = build_double_barrier(fixture::spec(Case::fig2));
    EXPECT_THROW(scan_poles(v, fixture::setup(), {1e-4, 1.0, -1.0, 0.0}, 10, 0.1), DomainError);
}

TEST(Poles, ResidualsSmallAndQuadrantCorrect) {
    for (Case c : fixture::all_cases) {
        const auto& s = fixture::scenario(c);
        ASSERT_EQ(s.poles.size(), 10u);
        for (const auto& p : s.poles) {
            EXPECT_GT(p.alpha(), 0.0);
            EXPECT_GT(p.beta(), 0.0);
            const double h = 1e-7 * std::max(1.0, std::abs(p.k));
            const auto J = [&](cplx k) { return outgoing_condition(s.potential, k, fixture::setup()); };
            const double scale = std::abs(J(p.k + h) - J(p.k - h)) / (2 * h) * std::max(1.0, std::abs(p.k));
            EXPECT_LT(p.residual, 1e-10 * scale) << fixture::name(c) << " n=" << p.index;
        }
        EXPECT_TRUE(s.poles.front().proper) << fixture::name(c);
    }
}

TEST(Poles, SortedAndOrdered) {
    for (Case c : fixture::all_cases) {
        const auto& p = fixture::scenario(c).poles;
        for (std::size_t i = 1; i < p.size(); ++i) EXPECT_LT(p[i - 1].alpha(), p[i].alpha());
        EXPECT_LT(p[0].energy.gamma, p[1].energy.gamma);
        EXPECT_LT(p[0].energy.epsilon, p[1].energy.epsilon);
        for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i].index, static_cast<int>(i + 1));
    }
}

TEST(Poles, EnergyFormula) {
    const auto& p = fixture::scenario(Case::fig2).poles.front();
    const double kappa = fixture::setup().kinetic_scale();
    EXPECT_EQ(p.energy.epsilon, kappa * (p.alpha() * p.alpha() - p.beta() * p.beta()));
    EXPECT_EQ(p.energy.gamma, kappa * 4.0 * p.alpha() * p.beta());
    EXPECT_EQ(p.proper, p.alpha() > p.beta());
}

TEST(RefinePole, BoxGuessConvergesToFirstPole) {
    const auto& s = fixture::scenario(Case::fig1);
    const auto p = refine_pole(s.potential, fixture::setup(), cplx(std::numbers::pi / 6.2, -0.01));
    EXPECT_LT(std::abs(p.k - s.poles.front().k), 1e-12);
}

TEST(RefinePole, FixedPointAndIdempotence) {
    for (Case c : fixture::all_cases) {
        const auto& s = fixture::scenario(c);
        const auto once = refine_pole(s.potential, fixture::setup(), s.poles.front().k);
        EXPECT_LE(once.iterations, 2);
        EXPECT_LT(std::abs(once.k - s.poles.front().k), 1e-13);
        const auto twice = refine_pole(s.potential, fixture::setup(), once.k);
        EXPECT_LT(std::abs(twice.k - once.k), 1e-13);
    }
}

TEST(RefinePole, RealAxisSeedFailsInsideRegion) {
    const auto& s = fixture::scenario(Case::fig1);
    const ScanRegion region{0.05, 0.3, -0.05, -1e-6};
    try {
        refine_pole(s.potential, fixture::setup(), cplx(0.2, 0.0), region);
        FAIL() << "expected NoConvergence";
    } catch (const NoConvergence& e) {
        EXPECT_GE(e.trail().size(), 1u);
        EXPECT_EQ(e.trail().front(), cplx(0.2, 0.0));
    }
}

TEST(MirrorPole, DefinitionAndInvolution) {
    const auto p = make_pole(3, {0.5, -0.1}, 0.0, fixture::setup());
    const auto m = mirror_pole(p);
    EXPECT_EQ(m.k, cplx(-0.5, -0.1));
    EXPECT_EQ(m.energy.epsilon, p.energy.epsilon);
    EXPECT_EQ(m.energy.gamma, -p.energy.gamma);
    const auto mm = mirror_pole(m);
    EXPECT_EQ(mm.k, p.k);
    EXPECT_EQ(mm.index, p.index);
    EXPECT_EQ(mm.energy.gamma, p.energy.gamma);
}

TEST(MirrorPole, IsAZeroOfJ) {
    const auto& s = fixture::scenario(Case::fig3);
    const auto m = mirror_pole(s.poles.front());
    EXPECT_LT(std::abs(outgoing_condition(s.potential, m.k, fixture::setup())), 1e-9);
}

TEST(LifetimeAndR, ReferenceValues) {
    const auto& setup = fixture::setup();
    auto with_gamma = [&](double eps, double gamma) {
        ResonancePole p;
        p.energy = {eps, gamma};
        return lifetime_and_R(p, setup);
    };
    const auto a = with_gamma(0.09959, 4.0325e-5);
    EXPECT_NEAR(a.tau, 16321.9, 16321.9 * 1e-3);
    EXPECT_NEAR(a.R, 2469.78, 2469.78 * 1e-3);
    const auto b = with_gamma(0.05639, 0.06151);
    EXPECT_NEAR(b.tau, 10.69, 10.69 * 1e-2);
    EXPECT_NEAR(b.R, 0.91, 0.91 * 1e-2);
    const auto c = with_gamma(0.07025, 0.40075);
    EXPECT_NEAR(c.tau, 1.64, 1.64 * 1e-2);
    EXPECT_NEAR(c.R, 0.1753, 0.1753 * 1e-2);
}

TEST(LifetimeAndR, ZeroWidthIsDegenerate) {
    ResonancePole p;
    p.energy = {0.1, 0.0};
    EXPECT_THROW(lifetime_and_R(p, fixture::setup()), DegeneratePole);
}
