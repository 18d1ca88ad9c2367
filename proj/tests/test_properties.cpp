#include <cmath>

#include <gtest/gtest.h>

#include <ps1/invariants.hpp>

using namespace ps1;
using namespace ps1::invariants;

namespace {

void expect_pass(const CheckResult& r) {
    EXPECT_TRUE(r.passed) << r.name << ": worst " << r.worst << " bound " << r.bound << " (" << r.detail << ")";
    EXPECT_LE(r.worst, r.bound) << r.name;
}

}  // namespace

class SeededProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(SeededProperty, DetLambda) { expect_pass(det_lambda(GetParam(), 2000)); }
TEST_P(SeededProperty, ParitySymmetry) { expect_pass(parity_symmetry(GetParam(), 20)); }
TEST_P(SeededProperty, ZeroCurrent) { expect_pass(zero_current(GetParam(), 20)); }
TEST_P(SeededProperty, JumpClosedForm) { expect_pass(jump_closed_form(GetParam(), 20)); }
TEST_P(SeededProperty, ContinuityWithoutOuterStrengths) { expect_pass(continuity_without_outer_strengths(GetParam(), 20)); }

INSTANTIATE_TEST_SUITE_P(Seeds, SeededProperty, ::testing::Values(42u, 7u, 2024u));

TEST(Properties, TypeThreeSqueeze) { expect_pass(type_three_squeeze()); }

TEST(Properties, SuiteForVerifySeed) {
    const auto suite = property_suite(42);
    EXPECT_EQ(suite.size(), 6u);
    for (const auto& r : suite) expect_pass(r);
}

TEST(Properties, ConfigSourceIsReproducible) {
    ConfigSource a(11), b(11);
    for (int i = 0; i < 5; ++i) {
        const auto x = a.next(), y = b.next();
        EXPECT_EQ(x.pot.v11, y.pot.v11);
        EXPECT_EQ(x.pot.v33, y.pot.v33);
        EXPECT_EQ(x.geom.x2, y.geom.x2);
        EXPECT_GE(x.geom.l(), 0.2);
        EXPECT_LE(x.geom.l(), 3.0);
        EXPECT_LE(std::abs(x.pot.v22), 5.0);
    }
}

TEST(Properties, RecordFlagsBoundViolation) {
    CheckResult r{"probe", true, 0.0, 1e-9, ""};
    invariants::detail::record(r, 1e-12);
    EXPECT_TRUE(r.passed);
    invariants::detail::record(r, 1e-6);
    EXPECT_FALSE(r.passed);
    EXPECT_EQ(r.worst, 1e-6);
    CheckResult n{"nan", true, 0.0, 1.0, ""};
    invariants::detail::record(n, NAN);
    EXPECT_FALSE(n.passed);
    EXPECT_TRUE(std::isinf(n.worst));
}

TEST(Properties, OracleAgreement) { expect_pass(oracle_agreement(42, 10)); }
