#include "slpdigits/coeff.hpp"
#include "slpdigits/errors.hpp"
#include "slpdigits/workspace.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace slpdigits;
using namespace slpdigits::testing;

namespace {

CoeffVector vec(std::initializer_list<std::uint64_t> xs) { return CoeffVector(xs); }

CoeffVector random_poly(Rng& rng, std::size_t len, std::uint64_t p) {
    CoeffVector out(len);
    for (auto& x : out) {
        x = uniform(rng, 0, p - 1);
    }
    return out;
}

mpz_class factorial(std::uint64_t n) {
    mpz_class f = 1;
    for (std::uint64_t i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

}  // namespace

TEST(ProductTree, Examples) {
    EXPECT_EQ(product_tree_mod_p(3, 2, 7).coeffs, vec({3, 3, 1}));
    EXPECT_EQ(product_tree_mod_p(2, 1, 5).coeffs, vec({3, 1}));
    const auto poly = product_tree_mod_p(5, 5, 101);
    for (std::uint64_t k = 1; k <= 5; ++k) {
        mpz_class expected;
        mpz_fdiv_r_ui(expected.get_mpz_t(), coeff_direct(5, k, 5).get_mpz_t(), 101);
        EXPECT_EQ(poly.coeffs[k - 1], expected.get_ui());
    }
    EXPECT_EQ(product_tree_mod_p(1, 1, 13).coeffs, vec({1}));
}

TEST(ProductTree, MonicOfDegreeTMinusOne) {
    for (std::uint64_t T : {1, 2, 9, 17, 40, 100, 300}) {
        const auto poly = product_tree_mod_p(T, (T + 1) / 2, 1'000'003);
        EXPECT_EQ(poly.degree(), T - 1);
        EXPECT_EQ(poly.coeffs.back(), 1U);
    }
}

TEST(ProductTree, EvaluationAtZero) {
    // f(0) = prod_{h != j} (-h) = (-1)^(T-1) T!/j.
    Rng rng(5);
    PrimeStream primes;
    std::vector<std::uint64_t> pool;
    for (int i = 0; i < 2000; ++i) {
        pool.push_back(*primes.next());
    }
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = pool[uniform(rng, 100, pool.size() - 1)];
        const auto T = uniform(rng, 1, 150);
        const auto j = uniform(rng, 1, T);
        const auto poly = product_tree_mod_p(T, j, p);
        mpz_class expected = factorial(T) / j;
        if ((T - 1) % 2 == 1) {
            expected = -expected;
        }
        mpz_class r;
        mpz_fdiv_r_ui(r.get_mpz_t(), expected.get_mpz_t(), p);
        ASSERT_EQ(poly.eval(0), r.get_ui()) << "T=" << T << " j=" << j << " p=" << p;
    }
}

TEST(ProductTree, RejectsBadArguments) {
    EXPECT_THROW(product_tree_mod_p(3, 0, 7), std::invalid_argument);
    EXPECT_THROW(product_tree_mod_p(3, 4, 7), std::invalid_argument);
    EXPECT_THROW(product_tree_mod_p(3, 1, std::uint64_t{1} << 33), std::invalid_argument);
    EXPECT_THROW(coefficient_mod_p(3, 4, 1, 7), std::invalid_argument);
}

TEST(PolyMul, NttMatchesSchoolbook) {
    Rng rng(6);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = trial % 3 == 0 ? std::uint64_t{2} : uniform(rng, 3, (1u << 31));
        const auto la = uniform(rng, 1, 400);
        const auto lb = uniform(rng, 1, 400);
        const auto a = random_poly(rng, la, p);
        const auto b = random_poly(rng, lb, p);
        ASSERT_EQ(poly_mul_mod(a, b, p), poly_mul_schoolbook(a, b, p)) << la << "x" << lb << " mod " << p;
    }
    EXPECT_TRUE(poly_mul_mod({}, vec({1}), 7).empty());
}

TEST(CoefficientModP, MatchesFullTree) {
    for (std::uint64_t T : {1, 5, 9, 10, 33, 64, 97}) {
        for (std::uint64_t j : {std::uint64_t{1}, (T + 1) / 2, T}) {
            const auto full = product_tree_mod_p(T, j, 65'537);
            for (std::uint64_t k = 1; k <= T; ++k) {
                ASSERT_EQ(coefficient_mod_p(T, k, j, 65'537), full.coeffs[k - 1]) << T << " " << k << " " << j;
            }
        }
    }
}

TEST(CoeffCrt, Examples) {
    EXPECT_EQ(coeff_crt(3, 2, 2), -4);
    EXPECT_EQ(coeff_crt(3, 3, 1), 1);
    EXPECT_EQ(coeff_crt(3, 1, 1), 6);
    EXPECT_EQ(coeff_direct(3, 2, 2), -4);
    EXPECT_EQ(coeff_direct(3, 3, 1), 1);
    EXPECT_EQ(coeff_direct(3, 1, 1), 6);
    EXPECT_EQ(coeff_crt(1, 1, 1), 1);
}

TEST(CoeffCrt, ExhaustiveAgainstDirectUpTo32) {
    for (std::uint64_t T = 1; T <= 32; ++T) {
        const auto budget = primes_to_threshold(T);
        const mpz_class bound = factorial(T) * pow_ui(2, T);
        for (std::uint64_t j = 1; j <= T; ++j) {
            const auto batch = coeff_crt_batch(T, 1, j, j, budget);
            for (std::uint64_t k = 1; k <= T; ++k) {
                const auto direct = coeff_direct(T, k, j);
                ASSERT_EQ(coeff_crt(T, k, j, budget), direct) << T << " " << k << " " << j;
                ASSERT_LE(abs(direct), bound);
                ASSERT_LT(2 * abs(direct), budget.delta);
            }
            ASSERT_EQ(batch.front(), coeff_direct(T, 1, j));
        }
    }
}

TEST(CoeffCrt, BatchMatchesSingle) {
    for (std::uint64_t T : {7, 40, 120}) {
        const auto budget = primes_to_threshold(T);
        for (std::uint64_t k : {std::uint64_t{1}, T / 3 + 1, T}) {
            const auto all = coeff_crt_batch(T, k, 1, T, budget);
            ASSERT_EQ(all.size(), T);
            for (std::uint64_t j = 1; j <= T; j += 1 + T / 10) {
                ASSERT_EQ(all[j - 1], coeff_crt(T, k, j, budget)) << T << " " << k << " " << j;
            }
        }
    }
    EXPECT_THROW(coeff_crt_batch(5, 1, 3, 2, primes_to_threshold(5)), std::invalid_argument);
}

TEST(CoeffCrt, RandomSpotChecksUpTo200) {
    Rng rng(12);
    for (int trial = 0; trial < 40; ++trial) {
        const auto T = uniform(rng, 33, 200);
        const auto k = uniform(rng, 1, T);
        const auto j = uniform(rng, 1, T);
        ASSERT_EQ(coeff_crt(T, k, j), coeff_direct(T, k, j, 200)) << T << " " << k << " " << j;
    }
}

TEST(CoeffDirect, Guard) {
    EXPECT_THROW(coeff_direct(65, 1, 1), SizeCapExceeded);
    EXPECT_NO_THROW(coeff_direct(64, 1, 1));
    EXPECT_THROW(coeff_direct(5, 6, 1), std::invalid_argument);
}

TEST(CoeffCrt, CoefficientMemoryWithinFourWordsPerTerm) {
    for (std::uint64_t T : {16, 64, 150, 400}) {
        workspace::reset_coeff_words_peak();
        const auto budget = primes_to_threshold(T);
        coeff_crt(T, T / 2 + 1, T / 3 + 1, budget);
        EXPECT_LE(workspace::coeff_words_peak(), 4 * T) << "T=" << T;
        workspace::reset_coeff_words_peak();
        coeff_crt_batch(T, T / 2 + 1, 1, std::min<std::uint64_t>(T, 8), budget);
        EXPECT_LE(workspace::coeff_words_peak(), 4 * T) << "batch T=" << T;
    }
}
