#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <ps1/model.hpp>

using namespace ps1;

TEST(Potential, RenormalizationIdentities) {
    const Potential p{0.7, -1.2, 2.5, 1.3};
    EXPECT_EQ(p.v1() - p.v11, p.m);
    EXPECT_EQ(p.v33 - p.v3(), p.m);
    EXPECT_EQ(p.va(), 0.5 * (p.v1() + p.v3()));
    const auto q = Potential::from_renormalized(p.v1(), p.v2(), p.v3(), p.m);
    EXPECT_DOUBLE_EQ(q.v11, p.v11);
    EXPECT_DOUBLE_EQ(q.v33, p.v33);
}

TEST(Potential, ValidateRejectsBadInput) {
    EXPECT_THROW((Potential{0, 0, 0, 0.0}.validate()), NumericalError);
    EXPECT_THROW((Potential{NAN, 0, 0, 1.0}.validate()), NumericalError);
    EXPECT_THROW((Geometry{1.0, 1.0}.validate()), NumericalError);
    EXPECT_NO_THROW(Geometry::centered(0.5).validate());
}

TEST(EnergyPoint, RhoIdentities) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.999, 0.999);
    for (int i = 0; i < 10000; ++i) {
        const double m = 1.7, E = u(rng) * m;
        const auto ep = EnergyPoint::at(E, m);
        ASSERT_GT(ep.kappa, 0.0);
        ASSERT_GT(ep.rho, 0.0);
        EXPECT_NEAR(ep.rho * ep.rho_inv(), 1.0, 1e-15);
        // Relative to rho^-1 + rho: the difference cancels as E -> 0.
        const double sum = ep.rho_inv() + ep.rho;
        EXPECT_LT(std::abs(ep.rho_inv() - ep.rho - 2.0 * E / ep.kappa) / sum, 1e-13);
        EXPECT_LT(std::abs(sum - 2.0 * m / ep.kappa) / sum, 1e-13);
    }
}

TEST(EnergyPoint, OutsideGapThrows) {
    try {
        EnergyPoint::at(1.0, 1.0);
        FAIL();
    } catch (const NumericalError& e) {
        EXPECT_EQ(e.code(), Errc::GapEdge);
    }
}

TEST(SpinMatrices, SymmetryRelations) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    const auto C = SpinMatrices::C(), P = SpinMatrices::P();
    const Potential free{0, 0, 0, 1.0};
    for (int i = 0; i < 100; ++i) {
        const auto H = hamiltonian(free, u(rng));
        EXPECT_LT((C * H + H * C).norm(), 1e-14);
    }
    EXPECT_LT((P * SpinMatrices::Sy() + SpinMatrices::Sy() * P).norm(), 1e-15);
    EXPECT_LT((P * SpinMatrices::Sz() - SpinMatrices::Sz() * P).norm(), 1e-15);
}

TEST(KSquared, FreeGapValue) { EXPECT_NEAR(k_squared(Potential{0, 0, 0, 1.0}, 0.5), -0.75, 1e-15); }

TEST(KSquared, DegenerateLine) {
    const double V = 0.4;
    const auto p = Potential::from_renormalized(V, V, V, 1.0);
    for (double E : {-0.9, -0.2, 0.1, 0.95}) EXPECT_NEAR(k_squared(p, E), (E - V) * (E - V), 1e-14);
}

TEST(KSquared, SatisfiesCubicResidual) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> v(-5.0, 5.0), e(-0.99, 0.99);
    for (int i = 0; i < 2000; ++i) {
        const Potential p{v(rng), v(rng), v(rng), 1.0};
        const double E = e(rng);
        if (near_va(p, E) || std::abs(E - p.va()) < 1e-6) continue;
        const double k2 = k_squared(p, E);
        const double scale = std::abs(dispersion_F(p, E)) + std::abs(dispersion_G(p, E) * k2) + 1.0;
        EXPECT_LT(std::abs(dispersion_residual(p, E, k2)) / scale, 1e-12);
    }
}

TEST(KSquared, PoleAtVa) {
    const Potential p{0.2, 0.0, 0.4, 1.0};
    try {
        k_squared(p, p.va());
        FAIL();
    } catch (const NumericalError& e) {
        EXPECT_EQ(e.code(), Errc::PoleAtVa);
    }
}

TEST(ScKernel, ContinuesThroughZero) {
    const double t = 0.8;
    for (double w : {-1e-9, 0.0, 1e-9}) {
        const auto sc = sc_kernel(w, t);
        EXPECT_NEAR(sc.s, t * (1.0 - w * t * t / 6.0), 1e-15);
        EXPECT_NEAR(sc.c, 1.0 - w * t * t / 2.0, 1e-15);
    }
    EXPECT_NEAR(sc_kernel(4.0, t).s, std::sin(1.6) / 2.0, 1e-15);
    EXPECT_NEAR(sc_kernel(-4.0, t).c, std::cosh(1.6), 1e-14);
    EXPECT_NEAR(sc_kernel(4.0, t).s * sc_kernel(4.0, t).s * 4.0 + std::pow(sc_kernel(4.0, t).c, 2), 1.0, 1e-15);
}

TEST(Gamma, ClosedForms) {
    const double E = 0.3, k = 1.7;
    const auto ep = EnergyPoint::at(E, 1.0);
    EXPECT_NEAR(gamma(Potential{0.5, 0.0, -0.2, 1.0}, E, k), ep.kappa / k, 1e-15);
    EXPECT_NEAR(gamma(Potential{0.5, E, -0.2, 1.0}, E, k), 0.0, 1e-15);
    EXPECT_THROW(gamma(Potential{}, 0.0, k), NumericalError);
}

// Type II: v1 = m, v3 = -m and v2 = V; then gamma = -sqrt(V/E - 1).
TEST(Gamma, TypeTwoReduction) {
    const double V = 3.0;
    const auto p = Potential::from_renormalized(1.0, V, -1.0, 1.0);
    for (double E : {0.2, 0.5, 0.9}) {
        const double k = std::sqrt(k_squared(p, E));
        EXPECT_NEAR(gamma(p, E, k), -std::sqrt(V / E - 1.0), 1e-13);
    }
}

TEST(Eta, ClosedForms) {
    const Potential p{0.1, 0.4, 0.2, 1.0};
    EXPECT_EQ(eta(p, 0.4, 2.0), 0.0);
    const double k = 1.3, e = eta(p, -0.3, k);
    EXPECT_NEAR(e * (k / (kSqrt2 * (-0.3 - 0.4))), 1.0, 1e-15);
    EXPECT_THROW(eta(p, 0.5, 0.0), NumericalError);
}

// Along a P pencil with large V, eta tends to -sgn(V) sqrt(2 / beta).
TEST(Eta, LargeStrengthLimit) {
    const double beta = 1.0;
    for (double V : {1e5, -1e5}) {
        const Potential p{V, V, V, 1.0};
        const double E = 0.3, k = std::sqrt(k_squared(p, E));
        EXPECT_NEAR(eta(p, E, k), -sgn(V) * std::sqrt(2.0 / beta), 1e-4);
    }
}
