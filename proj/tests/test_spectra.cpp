#include <cmath>

#include <gtest/gtest.h>

#include <ps1/spectra.hpp>

using namespace ps1;

namespace {

PencilSpec pencil(Vertex v, double a1, double a2, double a3) { return PencilSpec{v, a1, a2, a3, {}, 1.0}; }

const BoundStateSolution* nearest(const std::vector<BoundStateSolution>& states, double E, Parity par) {
    const BoundStateSolution* best = nullptr;
    for (const auto& s : states)
        if (s.parity == par && (!best || std::abs(s.E - E) < std::abs(best->E - E))) best = &s;
    return best;
}

}  // namespace

TEST(Classify, Examples) {
    auto p = classify(pencil(Vertex::P1, 1, 1, 1));
    EXPECT_EQ(p.tag, SpectrumTag::P);
    EXPECT_DOUBLE_EQ(*p.beta, 1.0);
    auto d = classify(pencil(Vertex::P2, -1, 1, -1));
    EXPECT_EQ(d.tag, SpectrumTag::D);
    EXPECT_DOUBLE_EQ(*d.beta, -1.0);
    EXPECT_EQ(classify(pencil(Vertex::P1, 0, 1, 0)).tag, SpectrumTag::H2);
    EXPECT_EQ(classify(pencil(Vertex::P2, 0, 1, 0)).tag, SpectrumTag::Unclassified);
    EXPECT_EQ(classify(pencil(Vertex::P2, 1, 1, -1)).tag, SpectrumTag::H1);
    EXPECT_EQ(classify(pencil(Vertex::P1, 1, 0, 1)).tag, SpectrumTag::W1);
    EXPECT_EQ(classify(pencil(Vertex::P1, 2, 1, 0)).tag, SpectrumTag::W2);
    EXPECT_EQ(classify(pencil(Vertex::P1, -2, 1, 0)).tag, SpectrumTag::Unclassified);
    EXPECT_EQ(classify(pencil(Vertex::P1, 1, 0, 0)).tag, SpectrumTag::Unclassified);
    EXPECT_FALSE(classify(pencil(Vertex::P1, 1, 1, -1)).beta);
}

TEST(Classify, RuleProperty) {
    const double vals[] = {-2.0, -1.0, 0.0, 0.5, 3.0};
    for (double a1 : vals)
        for (double a2 : vals)
            for (double a3 : vals)
                for (auto v : {Vertex::P1, Vertex::P2}) {
                    const auto t = classify(pencil(v, a1, a2, a3));
                    const bool all = a1 != 0 && a2 != 0 && a3 != 0 && a1 + a3 != 0;
                    if (all && a1 * a3 / (a1 + a3) > 0) EXPECT_EQ(t.tag, SpectrumTag::P);
                    if (all && a1 * a3 / (a1 + a3) < 0) EXPECT_EQ(t.tag, SpectrumTag::D);
                    if (a1 != 0 && a1 == -a3 && a2 != 0) EXPECT_EQ(t.tag, SpectrumTag::H1);
                    if (a1 != 0 && a3 != 0 && a1 + a3 != 0 && a2 == 0) EXPECT_EQ(t.tag, SpectrumTag::W1);
                    if (t.beta) EXPECT_DOUBLE_EQ(*t.beta, 2 * a1 * a3 / (a1 + a3));
                }
}

TEST(Asymptotic, TypePBetaOneForm) {
    const auto t = classify(pencil(Vertex::P1, 1, 1, 1));
    const Geometry geom = Geometry::centered(0.5);
    for (double V : {7.0, 25.0, 61.0}) {
        const double th = V * 0.5 / 2.0;
        const auto lv = asymptotic_energy(t, V, geom);
        EXPECT_NEAR(lv[0].E, sgn(std::cos(th)) * std::sin(th), 1e-12);
        EXPECT_NEAR(lv[1].E, -sgn(std::sin(th)) * std::cos(th), 1e-12);
    }
}

TEST(Asymptotic, TypeDLimit) {
    const auto t = classify(pencil(Vertex::P2, -1, 1, -1));
    for (double V : {200.0, -200.0})
        for (const auto& lv : asymptotic_energy(t, V, Geometry::centered(5.0)))
            EXPECT_NEAR(lv.E, sgn(V) / std::sqrt(2.0), 1e-12);
}

TEST(Asymptotic, HydrogenLevelsMatchSolver) {
    const auto pen = pencil(Vertex::P1, 0, 1, 0);
    const auto t = classify(pen);
    const Geometry geom = Geometry::centered(0.1);
    const double V = 400.0;
    const auto states = find_bound_states(pen.at(V), geom);
    for (int n = 1; n <= 3; ++n) {
        const auto lv = asymptotic_energy(t, V, geom, n)[0];
        const double q = n * kPi / 0.1;
        EXPECT_NEAR(lv.E, std::sqrt(std::pow(q, 4) / (4 * V * V) + 1.0) - q * q / (2 * V), 1e-12);
        const auto* s = nearest(states, lv.E, lv.parity);
        ASSERT_NE(s, nullptr);
        EXPECT_NEAR(s->E, lv.E, 0.05 * lv.E);
    }
}

TEST(Asymptotic, WellLevelsAtLargeStrength) {
    const auto pen = pencil(Vertex::P1, 1, 0, 1);
    const auto t = classify(pen);
    const Geometry geom = Geometry::centered(2.5);
    const auto states = find_bound_states(pen.at(100.0), geom);
    for (int n = 5; n <= 7; ++n) {
        const auto lv = asymptotic_energy(t, 100.0, geom, n)[0];
        EXPECT_TRUE(lv.in_window);
        const auto* s = nearest(states, lv.E, lv.parity);
        ASSERT_NE(s, nullptr);
        EXPECT_NEAR(s->E, lv.E, 0.05 * std::abs(lv.E));
    }
}

// Bisection on (V - m)^2 (1 + V/m) = (n pi / l)^2 m^3, independent of the
// k^2 root search used by cutoff_values.
TEST(Cutoffs, HydrogenLikeOneMatchesPolynomial) {
    const auto t = classify(pencil(Vertex::P2, 1, 1, -1));
    const Geometry geom = Geometry::centered(2.0);
    for (int n = 1; n <= 3; ++n) {
        const double rhs = std::pow(n * kPi / 2.0, 2);
        double a = 1.0, b = 50.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (a + b);
            ((mid - 1) * (mid - 1) * (1 + mid) < rhs ? a : b) = mid;
        }
        double found = NAN;
        for (const auto& c : cutoff_values(t, geom, n, 50.0))
            if (c.V > 1.0 && c.threshold > 0) found = c.V;
        EXPECT_NEAR(found, a, 1e-9);
    }
}

TEST(Cutoffs, FrozenSymmetricPairs) {
    const auto t = classify(pencil(Vertex::P2, 1, 1, -1));
    const auto cuts = cutoff_values(t, Geometry::centered(2.0), 1, 10.0);
    ASSERT_EQ(cuts.size(), 2u);
    EXPECT_NEAR(cuts[0].V, -1.919342526844, 1e-9);
    EXPECT_NEAR(cuts[1].V, 1.919342526844, 1e-9);
}

TEST(Cutoffs, WellDetachmentNearSquareLaw) {
    const auto t = classify(pencil(Vertex::P1, 1, 0, 1));
    const double l = 2.5;
    for (int n = 3; n <= 5; ++n) {
        const double want = std::pow(n * kPi / l, 2);
        double best = NAN;
        for (const auto& c : cutoff_values(t, Geometry::centered(l), n, 100.0))
            if (c.V > 0 && (std::isnan(best) || std::abs(c.V - want) < std::abs(best - want))) best = c.V;
        EXPECT_NEAR(best, want, 0.1 * want);
    }
}

TEST(Cutoffs, SecondWellWindow) {
    const auto t = classify(pencil(Vertex::P1, 2, 1, 0));
    const double l = 2.0;
    for (int n = 1; n <= 2; ++n) {
        const double edge = -std::pow(n * kPi / l, 2) / (2.0 * 2.0);
        for (const auto& c : cutoff_values(t, Geometry::centered(l), n, 100.0))
            if (c.threshold < 0) EXPECT_LT(c.V, 0.0);
        EXPECT_FALSE(asymptotic_energy(t, 0.5 * edge, Geometry::centered(l), n)[0].in_window);
        EXPECT_TRUE(asymptotic_energy(t, 2.0 * edge, Geometry::centered(l), n)[0].in_window);
    }
}

TEST(Cutoffs, RejectsOtherTypes) {
    EXPECT_THROW(cutoff_values(classify(pencil(Vertex::P1, 1, 1, 1)), Geometry::centered(1.0), 1), NumericalError);
}

// The two cone lines |E| = |V| of the double-merging pencil for |V| < m are
// not bound states here: E = -V is the flat-band energy v1 = v3 = va, where
// the reduced system is singular, and E = +V = v2 gives k = 0 with a
// residual 2 - 2 V^2 l / kappa, which vanishes only at isolated V.
TEST(Sweep, DoubleMergingConeLines) {
    const auto pen = pencil(Vertex::P2, -1, 1, -1);
    const double l = 5.0;
    for (double V : {-0.6, 0.3, 0.7}) {
        const auto p = pen.at(V);
        EXPECT_NEAR(p.v1(), -V, 1e-15);
        EXPECT_NEAR(p.v3(), -V, 1e-15);
        const double kappa = std::sqrt(1 - V * V);
        const auto L = connection_matrix(p, Geometry::centered(l), V);
        EXPECT_NEAR(general_bound_condition(L, V, 1.0), 2.0 - 2.0 * V * V * l / kappa, 1e-12);
    }
}

TEST(Sweep, TypeDMergesAtLargeStrength) {
    const auto pen = pencil(Vertex::P2, -1, 1, -1);
    const auto states = find_bound_states(pen.at(50.0), Geometry::centered(5.0));
    const auto* p = nearest(states, 1 / std::sqrt(2.0), Parity::Plus);
    const auto* n = nearest(states, 1 / std::sqrt(2.0), Parity::Minus);
    ASSERT_TRUE(p && n);
    EXPECT_LT(std::abs(p->E - n->E), 1e-3);
    EXPECT_NEAR(p->E, 0.702124458635, 1e-10);
}

TEST(Sweep, BranchesAndEvents) {
    auto pen = pencil(Vertex::P1, 1, 1, 1);
    pen.V_grid = linear_grid(2.0, 20.0, 181);
    const auto bs = sweep(pen, Geometry::centered(0.5));
    EXPECT_EQ(bs.type.tag, SpectrumTag::P);
    ASSERT_EQ(bs.levels.size(), 181u);
    for (const auto& lv : bs.levels) {
        for (std::size_t i = 1; i < lv.size(); ++i) EXPECT_LE(lv[i - 1].sol.E, lv[i].sol.E);
        for (const auto& s : lv) EXPECT_GE(s.branch, 0);
    }
    EXPECT_GT(bs.branch_count, 0);
    for (const auto& e : bs.events) {
        EXPECT_GE(e.V, 2.0);
        EXPECT_LE(e.V, 20.0);
    }
}

TEST(Sweep, ThreadCountDoesNotChangeResult) {
    auto pen = pencil(Vertex::P2, 1, 1, -1);
    pen.V_grid = linear_grid(-4.0, 4.0, 81);
    SweepOptions one, many;
    one.threads = 1;
    many.threads = 4;
    const auto a = sweep(pen, Geometry::centered(2.0), one);
    const auto b = sweep(pen, Geometry::centered(2.0), many);
    ASSERT_EQ(a.levels.size(), b.levels.size());
    for (std::size_t i = 0; i < a.levels.size(); ++i) {
        ASSERT_EQ(a.levels[i].size(), b.levels[i].size());
        for (std::size_t j = 0; j < a.levels[i].size(); ++j) {
            EXPECT_EQ(a.levels[i][j].sol.E, b.levels[i][j].sol.E);
            EXPECT_EQ(a.levels[i][j].branch, b.levels[i][j].branch);
        }
    }
}

TEST(LinearGrid, Endpoints) {
    const auto g = linear_grid(-1.0, 3.0, 5);
    ASSERT_EQ(g.size(), 5u);
    EXPECT_EQ(g.front(), -1.0);
    EXPECT_EQ(g.back(), 3.0);
    EXPECT_DOUBLE_EQ(g[2], 1.0);
}
