#pragma once

// End-to-end digit extraction: the T-term partial-fraction loop, exact
// accumulation of the per-term fractions, rounding and digit inference.

#include "slpdigits/modmath.hpp"
#include "slpdigits/plan.hpp"
#include "slpdigits/slp.hpp"

#include <cstdint>

namespace slpdigits {

struct TermResult {
    std::uint64_t j = 0;
    FixedFraction tau;  // within b^-w of the fractional part of term j
};

struct ExtractionStats {
    std::uint64_t block = 0;        // S
    std::uint64_t terms = 0;        // T
    std::uint64_t block_count = 0;  // k
    std::uint64_t largest_prime = 0;  // P
    std::size_t prime_count = 0;
    std::uint64_t max_operand_bits = 0;
    std::uint64_t term_count = 0;
    double elapsed_ms = 0;
    unsigned workers = 0;
    std::uint64_t mod_mul_count = 0;
    // Process-wide peak of live operand storage during the call. Only
    // meaningful when nothing else runs concurrently.
    std::uint64_t peak_workspace_bits = 0;
};

struct DigitReport {
    FixedFraction gamma;        // y+1 digits
    std::uint32_t digit = 0;    // leading digit of gamma
    bool ambiguous = false;
    bool wrapped = false;
    bool zero_shortcut = false;
    ExtractionStats stats;
};

struct DigitInference {
    std::uint32_t digit = 0;
    bool ambiguous = false;
};

// Leading digit of gamma. Ambiguous iff some multiple of 1/b lies within
// b^-y of gamma (mod 1), so a value within the approximation radius could
// have a different leading digit.
DigitInference infer_digit(const FixedFraction& gamma, std::uint32_t y);

// One term of the sum, computed from scratch. Only the structural parts of the
// plan (t = S k - r, 1 <= k <= T, w) are checked; the error bound is the
// concern of extract_digits.
TermResult compute_term(const ExtractionPlan& plan, const SlpProgram& prog, std::uint64_t j);

// Level-y approximation of nu for the plan. Terms are split into `workers`
// contiguous ranges; the result is bit-identical for every worker count.
DigitReport extract_digits(const ExtractionPlan& plan, const SlpProgram& prog, unsigned workers = 1);

}  // namespace slpdigits
