#pragma once

// Shared test helpers: seeded generators and reference computations that do
// not go through the library's own evaluator.

#include "slpdigits/slp.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <vector>

namespace slpdigits::testing {

using Rng = std::mt19937_64;

inline std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

// All values s_1..s_L of the program with plain big-integer arithmetic.
inline std::vector<mpz_class> reference_values(const std::vector<Step>& steps) {
    std::vector<mpz_class> s{0, 1};
    for (const auto& st : steps) {
        const auto& x = s[st.lhs - 1];
        const auto& y = s[st.rhs - 1];
        switch (st.op) {
        case Op::add: s.push_back(x + y); break;
        case Op::sub: s.push_back(x - y); break;
        case Op::mul: s.push_back(x * y); break;
        }
    }
    return s;
}

inline mpz_class reference_value(const std::vector<Step>& steps) { return reference_values(steps).back(); }

inline mpz_class pow_ui(std::uint64_t b, std::uint64_t e) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), b, e);
    return out;
}

// Random program with at most max_len values whose result is positive and
// below 2^max_bits. Intermediates may be negative.
inline std::vector<Step> random_program(Rng& rng, std::size_t max_len, std::uint64_t max_bits) {
    for (;;) {
        const auto L = uniform(rng, 2, max_len);
        std::vector<Step> steps;
        std::vector<mpz_class> s{0, 1};
        bool ok = true;
        for (std::size_t i = 3; i <= L && ok; ++i) {
            const auto roll = uniform(rng, 0, 9);
            const Op op = roll < 4 ? Op::mul : roll < 8 ? Op::add : Op::sub;
            // Favour recent values so products grow.
            const auto pick = [&] {
                const auto back = std::min<std::uint64_t>(uniform(rng, 0, 3), i - 2);
                return uniform(rng, 0, 2) == 0 ? uniform(rng, 1, i - 1) : i - 1 - back;
            };
            const Step st{op, static_cast<std::uint32_t>(pick()), static_cast<std::uint32_t>(pick())};
            steps.push_back(st);
            const auto& x = s[st.lhs - 1];
            const auto& y = s[st.rhs - 1];
            s.push_back(op == Op::add ? mpz_class(x + y) : op == Op::sub ? mpz_class(x - y) : mpz_class(x * y));
            ok = mpz_sizeinbase(s.back().get_mpz_t(), 2) < max_bits;
        }
        if (ok && s.back() > 0) {
            return steps;
        }
    }
}

inline std::uint64_t reference_digit_count(mpz_class n, std::uint32_t b) {
    std::uint64_t d = 0;
    while (n > 0) {
        n /= b;
        ++d;
    }
    return d == 0 ? 1 : d;
}

// First `count` digits of {n / b^m}, by long division on the residue.
inline std::vector<std::uint32_t> reference_nu_digits(const mpz_class& n, std::uint32_t b, std::uint64_t m,
                                                      std::size_t count) {
    const auto den = pow_ui(b, m);
    mpz_class num = n % den;
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < count; ++i) {
        num *= b;
        out.push_back(static_cast<std::uint32_t>(mpz_class(num / den).get_ui()));
        num %= den;
    }
    return out;
}

// Mod-1 distance between gamma = G / b^g and nu = {n / b^m}, compared against
// b^-y, entirely in integers: returns true iff distance < b^-y.
inline bool within_level(const mpz_class& G, std::uint64_t g, const mpz_class& n, std::uint32_t b, std::uint64_t m,
                         std::uint32_t y) {
    // Common denominator D = b^(max(g, m)).
    const auto e = std::max<std::uint64_t>(g, m);
    const auto D = pow_ui(b, e);
    const mpz_class gamma = G * pow_ui(b, e - g);
    const mpz_class nu = (n % pow_ui(b, m)) * pow_ui(b, e - m);
    mpz_class diff = gamma - nu;
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), diff.get_mpz_t(), D.get_mpz_t());
    const mpz_class dist = std::min(r, mpz_class(D - r));
    // dist / D < b^-y  <=>  dist * b^y < D
    return dist * pow_ui(b, y) < D;
}

}  // namespace slpdigits::testing
