#include "slpdigits/plan.hpp"

#include "slpdigits/errors.hpp"

#include <mpfr.h>

#include <algorithm>
#include <stdexcept>

namespace slpdigits {
namespace {

constexpr unsigned kLogScaleBits = 192;
constexpr mpfr_prec_t kLogPrecision = 256;
constexpr std::uint64_t kMaxBlock = std::uint64_t{1} << 32;
constexpr std::uint64_t kMaxTerms = std::uint64_t{1} << 20;

struct ScaledLog {
    mpz_class lo;  // floor(2^K log x)
    mpz_class hi;  // ceil(2^K log x)
};

ScaledLog scaled_log(std::uint64_t x) {
    ScaledLog out;
    mpfr_t v;
    mpfr_init2(v, kLogPrecision);
    for (auto [rnd, target] : {std::pair{MPFR_RNDD, &out.lo}, std::pair{MPFR_RNDU, &out.hi}}) {
        mpfr_set_ui(v, x, MPFR_RNDN);  // exact: 64 bits fit
        mpfr_log(v, v, rnd);
        mpfr_mul_2ui(v, v, kLogScaleBits, rnd);  // exact scaling
        mpfr_get_z(target->get_mpz_t(), v, rnd);
    }
    mpfr_clear(v);
    return out;
}

mpz_class to_mpz(std::uint64_t x) {
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, -1, sizeof x, 0, 0, &x);
    return z;
}

void finalize(ExtractionPlan& plan) {
    for (;;) {
        if (plan.block > kMaxBlock || plan.terms > kMaxTerms) {
            throw InfeasiblePlan("plan parameters exceed caps (S=" + std::to_string(plan.block) +
                                 ", T=" + std::to_string(plan.terms) + ")");
        }
        plan.block_count = (plan.exponent + plan.block - 1) / plan.block;
        plan.padding = plan.block * plan.block_count - plan.exponent;

        if (!satisfies_size_condition(plan) || !satisfies_pole_gap(plan) || !satisfies_tail_bound(plan)) {
            ++plan.block;
            continue;
        }
        if (plan.block_count > plan.terms) {
            plan.terms = plan.block_count;
            continue;
        }
        break;
    }
    plan.working_digits = plan.level + floor_log(plan.terms, plan.base) + 3;
}

void check_common(std::uint32_t b, std::uint32_t y) {
    if (b < 2) {
        throw std::invalid_argument("base must be >= 2");
    }
    if (y < 1) {
        throw std::invalid_argument("level must be >= 1");
    }
}

}  // namespace

LogForm& LogForm::add(std::uint64_t x, const mpz_class& coefficient) {
    if (x == 0) {
        throw std::invalid_argument("log of zero");
    }
    if (x != 1 && sgn(coefficient) != 0) {
        terms_[x] += coefficient;
    }
    return *this;
}

std::optional<int> LogForm::sign() const {
    std::vector<std::pair<std::uint64_t, mpz_class>> live;
    for (const auto& [x, c] : terms_) {
        if (sgn(c) != 0) {
            live.emplace_back(x, c);
        }
    }
    if (live.empty()) {
        return 0;
    }
    if (live.size() == 1) {
        return sgn(live.front().second);  // log x > 0 for x >= 2
    }
    mpz_class lower = 0;
    mpz_class upper = 0;
    for (const auto& [x, c] : live) {
        const auto bounds = scaled_log(x);
        if (sgn(c) > 0) {
            lower += c * bounds.lo;
            upper += c * bounds.hi;
        } else {
            lower += c * bounds.hi;
            upper += c * bounds.lo;
        }
    }
    if (sgn(lower) > 0) {
        return 1;
    }
    if (sgn(upper) < 0) {
        return -1;
    }
    return std::nullopt;
}

std::uint32_t floor_log(std::uint64_t x, std::uint64_t b) {
    if (x < 1 || b < 2) {
        throw std::invalid_argument("floor_log needs x >= 1 and b >= 2");
    }
    std::uint32_t e = 0;
    while (x >= b) {
        x /= b;
        ++e;
    }
    return e;
}

bool satisfies_size_condition(const ExtractionPlan& plan) {
    // S T log a - 3 e log B - 3 (mu + y + 2) log b > 0
    LogForm form;
    form.add(plan.radix, to_mpz(plan.block) * to_mpz(plan.terms));
    form.add(plan.n_bound.base, -3 * to_mpz(plan.n_bound.exponent));
    form.add(plan.base, -3 * (to_mpz(plan.shift) + plan.level + 2));
    return form.positive();
}

bool satisfies_pole_gap(const ExtractionPlan& plan) {
    LogForm form;
    form.add(plan.radix, to_mpz(plan.block));
    form.add(plan.terms, mpz_class(-2));
    return form.positive();
}

bool satisfies_tail_bound(const ExtractionPlan& plan) {
    // a^S / (a^S - T) <= 2 once a^S > T^2 (or T = 1), so it suffices that
    // S T log a > log n + (mu+y+2) log b + 2T log 2 + (T+2) log T + log 2.
    if (!satisfies_pole_gap(plan)) {
        return false;
    }
    LogForm form;
    form.add(plan.radix, to_mpz(plan.block) * to_mpz(plan.terms));
    form.add(plan.n_bound.base, -to_mpz(plan.n_bound.exponent));
    form.add(plan.base, -(to_mpz(plan.shift) + plan.level + 2));
    form.add(2, -(2 * to_mpz(plan.terms) + 1));
    form.add(plan.terms, -(to_mpz(plan.terms) + 2));
    return form.positive();
}

std::vector<std::string> plan_violations(const ExtractionPlan& plan) {
    std::vector<std::string> out;
    if (plan.zero_shortcut) {
        return out;
    }
    if (plan.block < 1 || plan.terms < 1) {
        out.emplace_back("S and T must be positive");
        return out;
    }
    if (!satisfies_size_condition(plan)) {
        out.emplace_back("S*T*log a <= 3(log n + (mu+y+2) log b)");
    }
    if (!satisfies_pole_gap(plan)) {
        out.emplace_back("a^S <= T^2");
    }
    if (!satisfies_tail_bound(plan)) {
        out.emplace_back("tail estimate does not reach b^-(y+2)");
    }
    if (plan.block * plan.block_count < plan.exponent ||
        plan.block * plan.block_count - plan.exponent != plan.padding || plan.padding >= plan.block) {
        out.emplace_back("t != S*k - r with 0 <= r < S");
    }
    if (plan.block_count < 1 || plan.block_count > plan.terms) {
        out.emplace_back("k outside [1, T]");
    }
    if (plan.working_digits != plan.level + floor_log(plan.terms, plan.base) + 3) {
        out.emplace_back("w != y + floor(log_b T) + 3");
    }
    return out;
}

ExtractionPlan make_plan(std::uint32_t b, std::uint64_t m, std::uint32_t y, std::uint64_t A) {
    check_common(b, y);
    if (m < 1) {
        throw std::invalid_argument("digit index m must be >= 1");
    }
    if (A < 1) {
        throw std::invalid_argument("digit-count approximation A must be >= 1");
    }
    if (A > (std::uint64_t{1} << 60) || m > (std::uint64_t{1} << 60)) {
        throw InfeasiblePlan("digit index or digit count beyond supported range");
    }
    ExtractionPlan plan;
    plan.base = b;
    plan.digit_index = m;
    plan.level = y;
    plan.radix = b;
    plan.digits_approx = A;

    if (m >= 2 * A + y + 1) {
        plan.zero_shortcut = true;
        plan.exponent = m;
        plan.n_bound = {b, 2 * A};
        return plan;
    }

    plan.exponent = std::max(2 * A, m);
    plan.shift = plan.exponent - m;
    plan.n_bound = {b, 2 * A};

    // R = 3 (3A + mu + y + 2) since log b / log a = 1.
    const mpz_class R = 3 * (3 * to_mpz(A) + to_mpz(plan.shift) + y + 2);
    mpz_class root;
    mpz_class R2 = R * R;
    mpz_root(root.get_mpz_t(), R2.get_mpz_t(), 3);
    plan.block = root.get_ui() + 1;
    mpz_root(root.get_mpz_t(), R.get_mpz_t(), 3);
    plan.terms = root.get_ui() + 1;

    finalize(plan);
    return plan;
}

ExtractionPlan make_plan_general(std::uint32_t b, std::uint64_t shift, std::uint32_t y, std::uint64_t a,
                                 std::uint64_t t, SizeBound n_bound) {
    check_common(b, y);
    if (a < 2) {
        throw std::invalid_argument("radix a must be >= 2");
    }
    if (t == 0) {
        throw InfeasiblePlan("exponent t = 0 leaves no block index k >= 1");
    }
    if (n_bound.base < 2) {
        throw std::invalid_argument("size bound base must be >= 2");
    }
    {
        LogForm fits;  // t log a - e log B >= 0
        fits.add(a, to_mpz(t));
        fits.add(n_bound.base, -to_mpz(n_bound.exponent));
        const auto s = fits.sign();
        if (!s || *s < 0) {
            throw InfeasiblePlan("size bound does not guarantee n < a^t");
        }
    }

    ExtractionPlan plan;
    plan.base = b;
    plan.digit_index = 0;
    plan.level = y;
    plan.radix = a;
    plan.exponent = t;
    plan.shift = shift;
    plan.n_bound = n_bound;

    // Starting point only; admissibility is re-checked exactly in finalize().
    mpfr_t R, tmp, root;
    mpfr_inits2(kLogPrecision, R, tmp, root, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_ui(tmp, n_bound.base, MPFR_RNDN);
    mpfr_log(tmp, tmp, MPFR_RNDN);
    mpfr_mul_ui(R, tmp, n_bound.exponent, MPFR_RNDN);
    mpfr_set_ui(tmp, b, MPFR_RNDN);
    mpfr_log(tmp, tmp, MPFR_RNDN);
    mpfr_mul_ui(tmp, tmp, shift, MPFR_RNDN);
    mpfr_add(R, R, tmp, MPFR_RNDN);
    mpfr_set_ui(tmp, b, MPFR_RNDN);
    mpfr_log(tmp, tmp, MPFR_RNDN);
    mpfr_mul_ui(tmp, tmp, std::uint64_t{y} + 2, MPFR_RNDN);
    mpfr_add(R, R, tmp, MPFR_RNDN);
    mpfr_mul_ui(R, R, 3, MPFR_RNDN);
    mpfr_set_ui(tmp, a, MPFR_RNDN);
    mpfr_log(tmp, tmp, MPFR_RNDN);
    mpfr_div(R, R, tmp, MPFR_RNDN);

    mpfr_cbrt(root, R, MPFR_RNDD);
    plan.terms = mpfr_get_ui(root, MPFR_RNDD) + 1;
    mpfr_sqr(tmp, root, MPFR_RNDD);
    plan.block = mpfr_get_ui(tmp, MPFR_RNDD) + 1;
    mpfr_clears(R, tmp, root, static_cast<mpfr_ptr>(nullptr));

    finalize(plan);
    return plan;
}

}  // namespace slpdigits
