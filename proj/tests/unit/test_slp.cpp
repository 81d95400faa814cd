#include "slpdigits/errors.hpp"
#include "slpdigits/slp.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <sstream>

using namespace slpdigits;
using namespace slpdigits::testing;

TEST(ParseSlp, TwoForcedSteps) {
    const auto prog = parse_slp("slp v1\nadd 2 2\nmul 3 3");
    EXPECT_EQ(prog.length(), 4U);
    EXPECT_EQ(eval_exact(prog), 4);
}

TEST(ParseSlp, EmptyComputationIsOne) {
    const auto prog = parse_slp("slp v1");
    EXPECT_EQ(prog.length(), 2U);
    EXPECT_EQ(eval_exact(prog), 1);
}

TEST(ParseSlp, ForwardReferenceNamesLine) {
    try {
        parse_slp("slp v1\nmul 4 2");
        FAIL() << "expected MalformedProgram";
    } catch (const MalformedProgram& e) {
        EXPECT_EQ(e.line(), 2U);
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
}

TEST(ParseSlp, CommentsAndBlankLines) {
    const auto prog = parse_slp("# header comment\n\nslp v1   # trailing\nadd 2 2 # two\n\n  mul 3 3\n");
    EXPECT_EQ(eval_exact(prog), 4);
}

TEST(ParseSlp, Errors) {
    EXPECT_THROW(parse_slp(""), ParseError);
    EXPECT_THROW(parse_slp("slp v2\nadd 2 2"), ParseError);
    EXPECT_THROW(parse_slp("slp v1\ndiv 2 2"), ParseError);
    EXPECT_THROW(parse_slp("slp v1\nadd 0 2"), ParseError);
    EXPECT_THROW(parse_slp("slp v1\nadd 2"), ParseError);
    EXPECT_THROW(parse_slp("slp v1\nadd 2 2 2"), ParseError);
    EXPECT_THROW(parse_slp("slp v1\nadd x 2"), ParseError);
    EXPECT_THROW(parse_slp("slp v1\nadd -1 2"), ParseError);
    EXPECT_THROW(parse_slp("slp v1\nadd 3 2"), MalformedProgram);
}

TEST(ParseSlp, StreamOverload) {
    std::istringstream in("slp v1\nadd 2 2\n");
    EXPECT_EQ(eval_exact(parse_slp(in)), 2);
}

TEST(ParseSlp, RoundTripProperty) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto steps = random_program(rng, 30, 2048);
        const SlpProgram prog(steps);
        const auto text = serialize_slp(prog);
        const auto again = parse_slp(text);
        ASSERT_EQ(again, prog);
        ASSERT_EQ(serialize_slp(again), text);
    }
}

TEST(GenPowerSlp, Examples) {
    EXPECT_EQ(eval_exact(gen_power_slp(2, 10)), 1024);
    EXPECT_EQ(eval_exact(gen_power_slp(3, 1)), 3);
    EXPECT_EQ(reference_digit_count(eval_exact(gen_power_slp(10, 100)), 10), 101U);
    EXPECT_THROW(gen_power_slp(1, 5), std::invalid_argument);
    EXPECT_THROW(gen_power_slp(2, 0), std::invalid_argument);
}

TEST(GenPowerSlp, MatchesIteratedMultiplicationAndLengthBound) {
    for (std::uint64_t a = 2; a <= 10; ++a) {
        mpz_class expected = 1;
        for (std::uint64_t t = 1; t <= 64; ++t) {
            expected *= a;
            const auto prog = gen_power_slp(a, t);
            ASSERT_EQ(reference_value({prog.steps().begin(), prog.steps().end()}), expected) << a << "^" << t;
            const auto bound = 4 * (std::bit_width(a) - 1 + std::bit_width(t) - 1 + 2);
            ASSERT_LE(prog.length(), bound) << a << "^" << t;
        }
    }
}

TEST(GenPowerSlp, LargeBaseAndExponent) {
    const auto prog = gen_power_slp(999'999'937, 1'000'003);
    EXPECT_LE(prog.length(), 4U * (29 + 19 + 2));
    const std::uint64_t p = 1'000'000'007;
    mpz_class expected;
    mpz_class base = 999'999'937;
    mpz_powm_ui(expected.get_mpz_t(), base.get_mpz_t(), 1'000'003, mpz_class(p).get_mpz_t());
    EXPECT_EQ(eval_mod(prog, p), expected.get_ui());
}

TEST(EvalMod, Examples) {
    EXPECT_EQ(eval_mod(gen_power_slp(2, 10), std::uint64_t{1000}), 24U);
    EXPECT_EQ(eval_mod(SlpProgram(), std::uint64_t{7}), 1U);
    mpz_class n;
    mpz_ui_pow_ui(n.get_mpz_t(), 7, 50);
    const std::uint64_t N = 1'000'000'007;
    EXPECT_EQ(eval_mod(gen_power_slp(7, 50), N), mpz_class(n % N).get_ui());
}

TEST(EvalMod, NegativeIntermediatesNormalised) {
    // s3 = 0 - 1 = -1, s4 = -1 * -1 = 1, s5 = s3 - s4 = -2, s6 = s5 * s5 = 4
    const auto prog = parse_slp("slp v1\nsub 1 2\nmul 3 3\nsub 3 4\nmul 5 5\n");
    EXPECT_EQ(eval_mod(prog, std::uint64_t{3}), 1U);
    const SlpProgram neg(std::vector<Step>{{Op::sub, 1, 2}});
    EXPECT_EQ(eval_mod(neg, std::uint64_t{10}), 9U);
    EXPECT_EQ(eval_mod(neg, mpz_class(10)), 9);
}

TEST(EvalMod, MatchesExactEvaluationProperty) {
    Rng rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const auto steps = random_program(rng, 40, 3000);
        const SlpProgram prog(steps);
        const auto n = reference_value(steps);
        const auto N = uniform(rng, 2, ~std::uint64_t{0});
        ASSERT_EQ(eval_mod(prog, N), mpz_class(n % mpz_class(std::to_string(N))).get_ui());
        mpz_class big = pow_ui(3, uniform(rng, 40, 400)) + uniform(rng, 0, 1000);
        ASSERT_EQ(eval_mod(prog, big), mpz_class(n % big));
    }
}

TEST(EvalMod, CongruenceProperty) {
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const SlpProgram prog(random_program(rng, 30, 2000));
        const mpz_class n1(static_cast<unsigned long>(uniform(rng, 2, 1u << 31)));
        const mpz_class n2(static_cast<unsigned long>(uniform(rng, 2, 1u << 31)));
        const mpz_class product = n1 * n2;
        ASSERT_EQ(mpz_class(eval_mod(prog, product) % n1), eval_mod(prog, n1));
    }
}

TEST(EvalMod, SlotReuseStaysSmall) {
    const auto prog = gen_power_slp(2, 1'000'000);
    EXPECT_LE(prog.slot_count(), 4U);
    for (std::size_t i = 1; i <= prog.length(); ++i) {
        EXPECT_LT(prog.slot_of(i), prog.slot_count());
    }
}

TEST(EvalExact, Examples) {
    EXPECT_EQ(eval_exact(gen_power_slp(2, 10)), 1024);
    EXPECT_EQ(eval_exact(gen_power_slp(3, 5)), 243);
    EXPECT_THROW(eval_exact(parse_slp("slp v1\nsub 1 2")), ValueNotPositive);
    EXPECT_THROW(eval_exact(parse_slp("slp v1\nsub 2 2")), ValueNotPositive);
}

TEST(EvalExact, SizeCap) {
    EXPECT_THROW(eval_exact(gen_power_slp(2, 1u << 27)), SizeCapExceeded);
    EXPECT_THROW(eval_exact(gen_power_slp(2, 1000), 100), SizeCapExceeded);
    EXPECT_NO_THROW(eval_exact(gen_power_slp(2, 1000), 2000));
}

TEST(EvalExact, LengthBoundProperty) {
    // n < 2^(2^(L-1)) for every program with a positive value.
    Rng rng(9);
    for (int trial = 0; trial < 300; ++trial) {
        const auto steps = random_program(rng, 12, 1u << 12);
        const SlpProgram prog(steps);
        const auto n = eval_exact(prog);
        const auto exp_bits = std::uint64_t{1} << (prog.length() - 1);
        ASSERT_LE(mpz_sizeinbase(n.get_mpz_t(), 2), exp_bits);
        ASSERT_GE(bit_length_bound(prog), mpz_sizeinbase(n.get_mpz_t(), 2));
    }
}

TEST(EstimateDigitCount, Examples) {
    EXPECT_EQ(estimate_digit_count(gen_power_slp(2, 10), 10), 4U);
    EXPECT_EQ(estimate_digit_count(SlpProgram(), 2), 1U);
    EXPECT_EQ(estimate_digit_count(gen_power_slp(10, 100), 10), 101U);
}

TEST(DigitCount, MatchesReference) {
    Rng rng(10);
    for (int trial = 0; trial < 500; ++trial) {
        const auto b = static_cast<std::uint32_t>(uniform(rng, 2, 40));
        mpz_class n = pow_ui(uniform(rng, 2, 50), uniform(rng, 0, 200)) + uniform(rng, 0, 5);
        if (n == 0) {
            continue;
        }
        ASSERT_EQ(digit_count(n, b), reference_digit_count(n, b)) << n.get_str() << " base " << b;
    }
}
