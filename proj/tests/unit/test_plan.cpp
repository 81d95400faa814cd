#include "slpdigits/errors.hpp"
#include "slpdigits/plan.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace slpdigits;
using namespace slpdigits::testing;

namespace {

// floor(x^(1/3)) and floor(x^(2/3)) by integer search.
std::uint64_t icbrt(const mpz_class& x) {
    mpz_class r;
    mpz_root(r.get_mpz_t(), x.get_mpz_t(), 3);
    return r.get_ui();
}

// Invariants re-derived with exact integer powers; usable while a^(S T) is small.
void expect_exact_invariants(const ExtractionPlan& p, const mpz_class& n_bound) {
    const auto aS = pow_ui(p.radix, p.block);
    EXPECT_GT(aS, mpz_class(p.terms) * p.terms);
    // (a^(ST))^1 > (n_bound b^(mu+y+2))^3
    const auto lhs = pow_ui(p.radix, p.block * p.terms);
    const mpz_class rhs = n_bound * pow_ui(p.base, p.shift + p.level + 2);
    EXPECT_GT(lhs, mpz_class(rhs * rhs * rhs));
    EXPECT_EQ(p.block * p.block_count - p.padding, p.exponent);
    EXPECT_LT(p.padding, p.block);
    EXPECT_GE(p.block_count, 1U);
    EXPECT_LE(p.block_count, p.terms);
    EXPECT_TRUE(plan_violations(p).empty());
}

}  // namespace

TEST(FloorLog, Values) {
    EXPECT_EQ(floor_log(1, 10), 0U);
    EXPECT_EQ(floor_log(9, 10), 0U);
    EXPECT_EQ(floor_log(10, 10), 1U);
    EXPECT_EQ(floor_log(1023, 2), 9U);
    EXPECT_EQ(floor_log(~std::uint64_t{0}, 2), 63U);
    EXPECT_THROW(floor_log(0, 10), std::invalid_argument);
}

TEST(LogForm, ExactAndBounded) {
    LogForm same;
    same.add(10, 5).add(10, -5);
    EXPECT_EQ(same.sign(), 0);
    LogForm powers;  // 10 log 2 - 3 log 10 = log(1024/1000) > 0
    powers.add(2, 10).add(10, -3);
    EXPECT_EQ(powers.sign(), 1);
    LogForm equal;  // log 4 - 2 log 2 = 0, not decidable by bounds
    equal.add(4, 1).add(2, -2);
    EXPECT_FALSE(equal.sign().has_value());
    LogForm close;  // 3^12 = 531441 vs 2^19 = 524288
    close.add(3, 12).add(2, -19);
    EXPECT_EQ(close.sign(), 1);
    EXPECT_THROW(LogForm().add(0, 1), std::invalid_argument);
}

TEST(MakePlan, SmallestNotShortcut) {
    const auto p = make_plan(10, 1, 1, 1);
    EXPECT_FALSE(p.zero_shortcut);
    EXPECT_EQ(p.exponent, 2U);
    EXPECT_EQ(p.shift, 1U);
    expect_exact_invariants(p, pow_ui(10, 2));
}

TEST(MakePlan, ZeroShortcut) {
    const auto p = make_plan(10, 100, 3, 10);
    EXPECT_TRUE(p.zero_shortcut);
    EXPECT_FALSE(make_plan(10, 23, 3, 10).zero_shortcut);
    EXPECT_TRUE(make_plan(10, 24, 3, 10).zero_shortcut);
}

TEST(MakePlan, FormulaInstantiation) {
    const auto p = make_plan(10, 50, 2, 1000);
    EXPECT_EQ(p.exponent, 2000U);
    EXPECT_EQ(p.shift, 1950U);
    const mpz_class R = 3 * (3 * 1000 + 1950 + 2 + 2);
    // Starting values from the formulas; finalize() may only raise them.
    EXPECT_GE(p.block, icbrt(R * R) + 1);
    EXPECT_GE(p.terms, icbrt(R) + 1);
    EXPECT_GT(mpz_class(p.block) * p.terms, R);
    expect_exact_invariants(p, pow_ui(10, 2000));
}

TEST(MakePlan, WorkingPrecisionRule) {
    Rng rng(20);
    for (int trial = 0; trial < 500; ++trial) {
        const auto b = static_cast<std::uint32_t>(uniform(rng, 2, 36));
        const auto y = static_cast<std::uint32_t>(uniform(rng, 1, 8));
        const auto A = uniform(rng, 1, 5000);
        const auto m = uniform(rng, 1, 2 * A + y);
        const auto p = make_plan(b, m, y, A);
        ASSERT_FALSE(p.zero_shortcut);
        ASSERT_TRUE(plan_violations(p).empty());
        // T / b^w <= b^-(y+2)  <=>  T b^(y+2) <= b^w
        ASSERT_LE(mpz_class(p.terms) * pow_ui(b, y + 2), pow_ui(b, p.working_digits));
        ASSERT_EQ(p.shift + m, p.exponent);
        ASSERT_EQ(p.exponent, std::max(2 * A, m));
    }
}

TEST(MakePlan, InvariantsExactOnSmallPlans) {
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const auto b = static_cast<std::uint32_t>(uniform(rng, 2, 16));
        const auto y = static_cast<std::uint32_t>(uniform(rng, 1, 5));
        const auto A = uniform(rng, 1, 60);
        const auto m = uniform(rng, 1, 2 * A + y);
        const auto p = make_plan(b, m, y, A);
        expect_exact_invariants(p, pow_ui(b, 2 * A));
    }
}

TEST(MakePlan, RejectsBadInput) {
    EXPECT_THROW(make_plan(1, 1, 1, 1), std::invalid_argument);
    EXPECT_THROW(make_plan(10, 0, 1, 1), std::invalid_argument);
    EXPECT_THROW(make_plan(10, 1, 0, 1), std::invalid_argument);
    EXPECT_THROW(make_plan(10, 1, 1, 0), std::invalid_argument);
    EXPECT_THROW(make_plan(10, 1, 1, std::uint64_t{1} << 62), InfeasiblePlan);
}

TEST(MakePlanGeneral, Examples) {
    const auto p = make_plan_general(10, 0, 1, 2, 30, {2, 20});
    expect_exact_invariants(p, pow_ui(2, 20));
    EXPECT_THROW(make_plan_general(10, 0, 1, 2, 0, {2, 0}), InfeasiblePlan);
    const auto q = make_plan_general(2, 0, 1, 2, 8, {2, 7});
    expect_exact_invariants(q, pow_ui(2, 7));
    EXPECT_THROW(make_plan_general(10, 0, 1, 2, 10, {2, 11}), InfeasiblePlan);
}

TEST(MakePlanGeneral, RandomPlansSatisfyInvariants) {
    Rng rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = uniform(rng, 2, 20);
        const auto t = uniform(rng, 1, 300);
        const auto b = static_cast<std::uint32_t>(uniform(rng, 2, 16));
        const auto mu = uniform(rng, 0, 50);
        const auto y = static_cast<std::uint32_t>(uniform(rng, 1, 6));
        const auto p = make_plan_general(b, mu, y, a, t, {a, t});
        ASSERT_TRUE(plan_violations(p).empty());
        ASSERT_LE(mpz_class(p.terms) * pow_ui(b, y + 2), pow_ui(b, p.working_digits));
    }
}

TEST(PlanViolations, DetectsBrokenPlans) {
    auto p = make_plan(10, 50, 2, 1000);
    auto bad = p;
    bad.block = 1;
    EXPECT_FALSE(plan_violations(bad).empty());
    bad = p;
    bad.working_digits += 1;
    EXPECT_FALSE(plan_violations(bad).empty());
    bad = p;
    bad.block_count = p.terms + 1;
    EXPECT_FALSE(plan_violations(bad).empty());
    bad = p;
    bad.terms = 0;
    EXPECT_FALSE(plan_violations(bad).empty());
}

TEST(PrecisionChain, TriangleBudget) {
    // 1/b^(y+1) + 2/b^(y+2) <= 1/b^y  <=>  b + 2 <= b^2, for every b >= 2.
    for (std::uint64_t b = 2; b <= 1000; ++b) {
        for (std::uint64_t y = 1; y <= 8; ++y) {
            const mpz_class lhs = pow_ui(b, 1) + 2;
            ASSERT_LE(lhs * pow_ui(b, y), pow_ui(b, y + 2));
        }
    }
}
