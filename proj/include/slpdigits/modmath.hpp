#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace slpdigits {

// ---------------------------------------------------------------------------
// Modular arithmetic

inline std::uint64_t mul_mod(std::uint64_t x, std::uint64_t y, std::uint64_t p) noexcept {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % p);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t modulus);

// base^exp mod N in [0, N), by left-to-right square-and-multiply.
mpz_class mod_pow(const mpz_class& base, const mpz_class& exp, const mpz_class& modulus);

// Inverse of x modulo the prime p. Throws NotInvertible when p | x.
std::uint64_t mod_inv(std::uint64_t x, std::uint64_t p);

// ---------------------------------------------------------------------------
// Primes

// Increasing primes starting at 2, produced by a segmented sieve. An optional
// inclusive upper limit ends the stream. Single consumer.
class PrimeStream {
public:
    explicit PrimeStream(std::optional<std::uint64_t> limit = std::nullopt);

    std::optional<std::uint64_t> next();
    std::uint64_t last() const noexcept { return last_; }

private:
    void sieve_next_segment();

    std::optional<std::uint64_t> limit_;
    std::uint64_t segment_lo_ = 0;
    std::vector<std::uint64_t> segment_;
    std::size_t cursor_ = 0;
    std::vector<std::uint64_t> base_primes_;
    std::uint64_t base_limit_ = 1;
    std::uint64_t last_ = 0;
};

// The primes p <= P whose product delta is the first to reach 2^(T+1) T!.
struct PrimeBudget {
    std::uint64_t largest = 0;  // P
    std::size_t count = 0;
    mpz_class delta;

    PrimeStream stream() const { return PrimeStream(largest); }
};

mpz_class crt_threshold(std::uint64_t T);
PrimeBudget primes_to_threshold(std::uint64_t T);

// ---------------------------------------------------------------------------
// Streaming Chinese remaindering against a modulus product fixed up front.

class CrtAccumulator {
public:
    explicit CrtAccumulator(mpz_class delta, mpz_class sum = 0);

    // Folds in H mod p. p must divide delta and not have been added before.
    void add(std::uint64_t residue, std::uint64_t p);

    // Least absolute residue r of the running sum mod delta, -delta/2 < r <= delta/2.
    mpz_class finalize() const;

    const mpz_class& delta() const noexcept { return delta_; }
    const mpz_class& sum() const noexcept { return sum_; }
    std::size_t count() const noexcept { return primes_.size(); }

private:
    mpz_class delta_;
    mpz_class sum_;
    mpz_class cofactor_;
    std::set<std::uint64_t> primes_;
};

// ---------------------------------------------------------------------------
// Exact base-b fixed-point fractions in [0, 1).

class FixedFraction {
public:
    FixedFraction(std::uint32_t base, std::vector<std::uint32_t> digits);

    static FixedFraction zero(std::uint32_t base, std::size_t digit_count);

    std::uint32_t base() const noexcept { return base_; }
    std::size_t size() const noexcept { return digits_.size(); }
    // Most significant first: value = sum d_i b^-i.
    std::span<const std::uint32_t> digits() const noexcept { return digits_; }

    // Integer N with value = N / base^size().
    mpz_class scaled() const;

    // 0-9A-Z for bases up to 36, otherwise space separated decimal digits.
    std::string digit_string() const;

    friend bool operator==(const FixedFraction&, const FixedFraction&) = default;

private:
    std::uint32_t base_;
    std::vector<std::uint32_t> digits_;
};

// floor(b^(w+1) u0 / v) / b^(w+1): the first w+1 digits of u0/v.
FixedFraction frac_from_ratio(const mpz_class& u0, const mpz_class& v, std::uint32_t base, std::uint32_t w);

// {x + y}; both must share base and digit count.
FixedFraction frac_add_mod1(const FixedFraction& x, const FixedFraction& y);

struct Rounded {
    FixedFraction value;
    bool wrapped = false;  // rounding reached 1.0, which wraps to 0
};

// Nearest value with y+1 digits, ties rounding up.
Rounded round_to_digits(const FixedFraction& x, std::uint32_t y);

}  // namespace slpdigits
