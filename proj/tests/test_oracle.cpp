#include <cmath>

#include <gtest/gtest.h>

#include <ps1/boundstates.hpp>
#include <ps1/invariants.hpp>
#include <ps1/oracle.hpp>

using namespace ps1;

namespace {

const Potential kBarrier{3.0, 3.0, 3.0, 1.0};
const Geometry kBarrierGeom = Geometry::centered(0.5);

}  // namespace

TEST(Shoot, BracketsBarrierRoot) {
    EXPECT_LT(oracle::shoot(kBarrier, kBarrierGeom, 0.55) * oracle::shoot(kBarrier, kBarrierGeom, 0.57), 0.0);
    EXPECT_LT(std::abs(oracle::shoot_normalized(kBarrier, kBarrierGeom, 0.562795167067)), 1e-9);
}

TEST(Shoot, AwayFromRootsStaysOffZero) {
    for (double E : {-0.2, 0.1, 0.3}) EXPECT_GT(std::abs(oracle::shoot_normalized(kBarrier, kBarrierGeom, E)), 1e-2);
}

TEST(Shoot, ZeroEnergyRejected) {
    EXPECT_THROW(oracle::shoot(kBarrier, kBarrierGeom, 0.0), NumericalError);
}

// A single RK4 step matrix reproduces the exact propagator to fourth order.
TEST(Rk4, StepMatchesExactPropagator) {
    const auto c = oracle::detail::coefficients(kBarrier, 0.3);
    const Potential& p = kBarrier;
    for (double h : {1e-2, 5e-3}) {
        const auto M = oracle::detail::rk4_step(c, h);
        const auto L = connection_matrix(p, Geometry{0.0, h}, 0.3);
        const double err = std::max({std::abs(M[0] - L.l11), std::abs(M[1] - L.l12), std::abs(M[2] - L.l21),
                                     std::abs(M[3] - L.l22)});
        EXPECT_LT(err, 1e-1 * std::pow(h, 5) * std::pow(std::abs(c.a12 * c.a21), 2.5) + 1e-15);
    }
}

TEST(Rk4, StepHalvingIsConverged) {
    invariants::ConfigSource src(3);
    std::vector<invariants::RandomConfig> cfgs;
    for (int i = 0; i < 5; ++i) cfgs.push_back(src.next());
    const auto r = invariants::rk4_step_halving(cfgs);
    EXPECT_TRUE(r.passed) << r.detail << " worst " << r.worst;
}

TEST(OracleBoundStates, FreeIsEmpty) {
    EXPECT_TRUE(oracle::oracle_bound_states(Potential{}, Geometry::centered(1.0)).empty());
}

TEST(OracleBoundStates, Barrier) {
    const auto e = oracle::oracle_bound_states(kBarrier, kBarrierGeom);
    ASSERT_EQ(e.size(), 2u);
    EXPECT_NEAR(e[0], -0.65, 0.01);
    EXPECT_NEAR(e[1], 0.56, 0.01);
}

// Hydrogen-like pencil V = 10 m, l = 2/m: 64 states in the phase-capped
// window, identical in count and energy to the transcendental solver.
TEST(OracleBoundStates, HydrogenLikeMatchesSolver) {
    const Potential p{0.0, 10.0, 0.0, 1.0};
    const Geometry geom = Geometry::centered(2.0);
    const auto o = oracle::oracle_bound_states(p, geom);
    const auto s = find_bound_states(p, geom);
    ASSERT_EQ(o.size(), s.size());
    EXPECT_EQ(o.size(), 64u);
    for (std::size_t i = 0; i < o.size(); ++i) EXPECT_NEAR(o[i], s[i].E, 1e-8);
    EXPECT_NEAR(o.back(), 0.994302579378, 1e-10);
    EXPECT_NEAR(o[o.size() - 2], 0.828564877606, 1e-10);
}

TEST(OracleBoundStates, RandomConfigsAgreeWithSolver) {
    const auto cmp = invariants::compare_with_oracle(42, 20);
    EXPECT_EQ(cmp.cases, 20);
    EXPECT_EQ(cmp.count_mismatches, 0);
    EXPECT_LT(cmp.max_energy_diff, 1e-8);
}
