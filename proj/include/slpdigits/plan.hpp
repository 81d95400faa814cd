#pragma once

// Parameter planning for digit extraction.
//
// The target is nu = {b^shift * n / a^exponent}. With a block length S and a
// term count T, write exponent = S*k - padding (0 <= padding < S). Then
//
//   b^shift * n / a^exponent  ~  sum_{j=1..T} b^shift * A_j / (a^S - j)
//
// where the A_j are Lagrange-interpolation numerators. A plan is admissible when
//
//   S*T*log a > 3 (log n + (shift + level + 2) log b)      (size condition)
//   a^S > T^2                                              (pole gap)
//   1 <= k <= T
//
// and additionally the explicit tail estimate
//
//   n a^S 4^T T^(T+2) b^shift / (a^(ST) (a^S - T)) < b^-(level+2)
//
// holds, which is what actually bounds the truncation error. Every check is
// decided with rigorous rational bounds on logarithms, never with plain
// floating point.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace slpdigits {

// n < base^exponent.
struct SizeBound {
    std::uint64_t base = 2;
    std::uint64_t exponent = 0;
};

struct ExtractionPlan {
    std::uint32_t base = 10;          // b
    std::uint64_t digit_index = 1;    // m (0 for plans built by make_plan_general)
    std::uint32_t level = 1;          // y
    std::uint64_t radix = 10;         // a
    std::uint64_t exponent = 0;       // t
    std::uint64_t shift = 0;          // mu
    std::uint64_t block = 0;          // S
    std::uint64_t terms = 0;          // T
    std::uint64_t block_count = 0;    // k, exponent = block * block_count - padding
    std::uint64_t padding = 0;        // r
    std::uint32_t working_digits = 0; // w; each term is carried to w+1 digits
    std::uint64_t digits_approx = 0;  // A
    SizeBound n_bound;
    bool zero_shortcut = false;
};

// Linear combination sum c_i log(x_i) with integer coefficients, decided with
// interval bounds. Terms sharing a single base are decided exactly.
class LogForm {
public:
    LogForm& add(std::uint64_t x, const mpz_class& coefficient);

    // +1, 0 or -1 when the sign is certain, nullopt when the bounds straddle 0.
    std::optional<int> sign() const;
    bool positive() const { return sign() == 1; }

private:
    std::map<std::uint64_t, mpz_class> terms_;
};

// Largest e with b^e <= x (x >= 1).
std::uint32_t floor_log(std::uint64_t x, std::uint64_t b);

// Plan for the m-th base-b digit of an n with roughly A base-b digits
// (1/2 < A/d < 2).
ExtractionPlan make_plan(std::uint32_t b, std::uint64_t m, std::uint32_t y, std::uint64_t A);

// Plan for {b^shift n / a^t} given n < n_bound.base^n_bound.exponent <= a^t.
ExtractionPlan make_plan_general(std::uint32_t b, std::uint64_t shift, std::uint32_t y, std::uint64_t a,
                                 std::uint64_t t, SizeBound n_bound);

bool satisfies_size_condition(const ExtractionPlan& plan);
bool satisfies_pole_gap(const ExtractionPlan& plan);
bool satisfies_tail_bound(const ExtractionPlan& plan);

// Human-readable list of violated invariants; empty for a valid plan.
std::vector<std::string> plan_violations(const ExtractionPlan& plan);

}  // namespace slpdigits
