#include "slpdigits/modmath.hpp"

#include "slpdigits/errors.hpp"
#include "slpdigits/workspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace slpdigits {
namespace {

constexpr std::uint64_t kSegmentSpan = std::uint64_t{1} << 15;

std::vector<std::uint64_t> simple_sieve(std::uint64_t limit) {
    std::vector<bool> composite(limit + 1, false);
    std::vector<std::uint64_t> primes;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) {
            continue;
        }
        primes.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += i) {
            composite[j] = true;
        }
    }
    return primes;
}

}  // namespace

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t modulus) {
    if (modulus == 1) {
        return 0;
    }
    std::uint64_t result = 1;
    base %= modulus;
    std::uint64_t muls = 0;
    while (exp) {
        if (exp & 1U) {
            result = mul_mod(result, base, modulus);
            ++muls;
        }
        base = mul_mod(base, base, modulus);
        ++muls;
        exp >>= 1U;
    }
    workspace::add_mod_muls(muls);
    return result;
}

mpz_class mod_pow(const mpz_class& base, const mpz_class& exp, const mpz_class& modulus) {
    if (modulus < 2) {
        throw std::invalid_argument("mod_pow requires N >= 2");
    }
    if (sgn(exp) < 0) {
        throw std::invalid_argument("mod_pow requires a non-negative exponent");
    }
    mpz_class b;
    mpz_mod(b.get_mpz_t(), base.get_mpz_t(), modulus.get_mpz_t());
    mpz_class result = 1;
    const auto weight = std::max<std::uint64_t>(1, mpz_size(modulus.get_mpz_t()));
    std::uint64_t muls = 0;
    for (auto bit = static_cast<long>(mpz_sizeinbase(exp.get_mpz_t(), 2)) - 1; bit >= 0 && sgn(exp) != 0; --bit) {
        result *= result;
        mpz_mod(result.get_mpz_t(), result.get_mpz_t(), modulus.get_mpz_t());
        ++muls;
        if (mpz_tstbit(exp.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) {
            result *= b;
            mpz_mod(result.get_mpz_t(), result.get_mpz_t(), modulus.get_mpz_t());
            ++muls;
        }
    }
    workspace::add_mod_muls(muls * weight);
    return result;
}

std::uint64_t mod_inv(std::uint64_t x, std::uint64_t p) {
    if (p < 2) {
        throw std::invalid_argument("mod_inv requires a prime modulus");
    }
    x %= p;
    if (x == 0) {
        throw NotInvertible(std::to_string(x) + " is not invertible modulo " + std::to_string(p));
    }
    // Extended Euclid on (p, x), tracking the coefficient of x.
    __int128 r0 = p, r1 = x;
    __int128 t0 = 0, t1 = 1;
    while (r1 != 0) {
        auto q = r0 / r1;
        auto r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        auto t2 = t0 - q * t1;
        t0 = t1;
        t1 = t2;
    }
    if (r0 != 1) {
        throw NotInvertible(std::to_string(x) + " is not invertible modulo " + std::to_string(p));
    }
    if (t0 < 0) {
        t0 += p;
    }
    return static_cast<std::uint64_t>(t0);
}

// ---------------------------------------------------------------------------

PrimeStream::PrimeStream(std::optional<std::uint64_t> limit) : limit_(limit) {}

void PrimeStream::sieve_next_segment() {
    const auto lo = segment_lo_;
    const auto hi = lo + kSegmentSpan;  // exclusive
    segment_lo_ = hi;

    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi))) + 1;
    if (root > base_limit_) {
        base_limit_ = std::max(root, base_limit_ * 2);
        base_primes_ = simple_sieve(base_limit_);
    }

    std::vector<bool> composite(kSegmentSpan, false);
    for (auto p : base_primes_) {
        if (p * p >= hi) {
            break;
        }
        auto start = std::max(p * p, (lo + p - 1) / p * p);
        for (auto m = start; m < hi; m += p) {
            composite[m - lo] = true;
        }
    }
    segment_.clear();
    cursor_ = 0;
    for (std::uint64_t i = std::max<std::uint64_t>(lo, 2); i < hi; ++i) {
        if (!composite[i - lo]) {
            segment_.push_back(i);
        }
    }
}

std::optional<std::uint64_t> PrimeStream::next() {
    while (cursor_ >= segment_.size()) {
        if (limit_ && segment_lo_ > *limit_) {
            return std::nullopt;
        }
        sieve_next_segment();
    }
    const auto p = segment_[cursor_];
    if (limit_ && p > *limit_) {
        return std::nullopt;
    }
    ++cursor_;
    last_ = p;
    return p;
}

mpz_class crt_threshold(std::uint64_t T) {
    mpz_class factorial;
    mpz_fac_ui(factorial.get_mpz_t(), T);
    mpz_class threshold = factorial;
    mpz_mul_2exp(threshold.get_mpz_t(), threshold.get_mpz_t(), T + 1);
    return threshold;
}

PrimeBudget primes_to_threshold(std::uint64_t T) {
    const auto threshold = crt_threshold(T);
    PrimeBudget budget;
    budget.delta = 1;
    PrimeStream stream;
    while (budget.delta < threshold) {
        const auto p = *stream.next();
        budget.delta *= p;
        budget.largest = p;
        ++budget.count;
    }
    return budget;
}

// ---------------------------------------------------------------------------

CrtAccumulator::CrtAccumulator(mpz_class delta, mpz_class sum) : delta_(std::move(delta)), sum_(std::move(sum)) {
    if (delta_ < 1) {
        throw ContractViolation("CRT modulus product must be positive");
    }
}

void CrtAccumulator::add(std::uint64_t residue, std::uint64_t p) {
    if (p < 2 || !mpz_divisible_ui_p(delta_.get_mpz_t(), p)) {
        throw ContractViolation("prime " + std::to_string(p) + " does not divide the CRT modulus product");
    }
    if (!primes_.insert(p).second) {
        throw ContractViolation("prime " + std::to_string(p) + " already incorporated");
    }
    mpz_divexact_ui(cofactor_.get_mpz_t(), delta_.get_mpz_t(), p);
    const auto c = mpz_fdiv_ui(cofactor_.get_mpz_t(), p);
    const auto n = mul_mod(mod_inv(c, p), residue % p, p);
    mpz_addmul_ui(sum_.get_mpz_t(), cofactor_.get_mpz_t(), n);
    if (sum_ >= delta_) {
        mpz_mod(sum_.get_mpz_t(), sum_.get_mpz_t(), delta_.get_mpz_t());
    }
    workspace::add_mod_muls(std::max<std::uint64_t>(1, mpz_size(delta_.get_mpz_t())));
}

mpz_class CrtAccumulator::finalize() const {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), sum_.get_mpz_t(), delta_.get_mpz_t());
    if (2 * r > delta_) {
        r -= delta_;
    }
    return r;
}

// ---------------------------------------------------------------------------

FixedFraction::FixedFraction(std::uint32_t base, std::vector<std::uint32_t> digits)
    : base_(base), digits_(std::move(digits)) {
    if (base_ < 2) {
        throw std::invalid_argument("base must be >= 2");
    }
    if (digits_.empty()) {
        throw std::invalid_argument("a fixed fraction needs at least one digit");
    }
    for (auto d : digits_) {
        if (d >= base_) {
            throw std::invalid_argument("digit " + std::to_string(d) + " out of range for base " +
                                        std::to_string(base_));
        }
    }
}

FixedFraction FixedFraction::zero(std::uint32_t base, std::size_t digit_count) {
    return FixedFraction(base, std::vector<std::uint32_t>(digit_count, 0));
}

mpz_class FixedFraction::scaled() const {
    mpz_class n = 0;
    for (auto d : digits_) {
        n *= base_;
        n += d;
    }
    return n;
}

std::string FixedFraction::digit_string() const {
    std::ostringstream out;
    if (base_ <= 36) {
        for (auto d : digits_) {
            out << static_cast<char>(d < 10 ? '0' + d : 'A' + (d - 10));
        }
    } else {
        for (std::size_t i = 0; i < digits_.size(); ++i) {
            out << (i ? " " : "") << digits_[i];
        }
    }
    return out.str();
}

FixedFraction frac_from_ratio(const mpz_class& u0, const mpz_class& v, std::uint32_t base, std::uint32_t w) {
    if (v < 1 || sgn(u0) < 0 || u0 >= v) {
        throw ContractViolation("frac_from_ratio requires 0 <= u0 < v");
    }
    std::vector<std::uint32_t> digits;
    digits.reserve(std::size_t{w} + 1);
    mpz_class rem = u0;
    mpz_class q;
    for (std::uint32_t i = 0; i <= w; ++i) {
        rem *= base;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), rem.get_mpz_t(), v.get_mpz_t());
        digits.push_back(static_cast<std::uint32_t>(q.get_ui()));
    }
    return FixedFraction(base, std::move(digits));
}

FixedFraction frac_add_mod1(const FixedFraction& x, const FixedFraction& y) {
    if (x.base() != y.base() || x.size() != y.size()) {
        throw ContractViolation("frac_add_mod1 needs operands with equal base and precision");
    }
    const auto b = x.base();
    std::vector<std::uint32_t> out(x.size());
    std::uint64_t carry = 0;
    for (auto i = x.size(); i-- > 0;) {
        std::uint64_t s = std::uint64_t{x.digits()[i]} + y.digits()[i] + carry;
        carry = s >= b ? 1 : 0;
        out[i] = static_cast<std::uint32_t>(s - carry * b);
    }
    return FixedFraction(b, std::move(out));
}

Rounded round_to_digits(const FixedFraction& x, std::uint32_t y) {
    const std::size_t keep = std::size_t{y} + 1;
    if (x.size() < keep) {
        throw ContractViolation("round_to_digits needs at least y+1 digits");
    }
    const auto b = x.base();
    const auto digits = x.digits();

    // Round up iff 2 * tail >= one unit in the last kept place.
    std::uint64_t carry = 0;
    for (auto i = digits.size(); i-- > keep;) {
        std::uint64_t d = 2 * std::uint64_t{digits[i]} + carry;
        carry = d >= b ? 1 : 0;
    }
    std::vector<std::uint32_t> out(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(keep));
    bool wrapped = false;
    if (carry) {
        auto i = keep;
        for (; i-- > 0;) {
            if (out[i] + 1 < b) {
                ++out[i];
                break;
            }
            out[i] = 0;
        }
        wrapped = i == static_cast<std::size_t>(-1);
    }
    return {FixedFraction(b, std::move(out)), wrapped};
}

}  // namespace slpdigits
