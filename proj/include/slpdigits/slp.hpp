#pragma once

// Straight-line programs: s1 = 0, s2 = 1, and s_i = s_j (+|-|*) s_k for
// i >= 3 with j, k < i. The last value is the integer n the program denotes.
//
// SLP v1 text format:
//
//   slp v1          # header, first non-comment line
//   add 2 2         # s3 = s2 + s2
//   mul 3 3         # s4 = s3 * s3
//
// Indices are 1-based. '#' starts a comment; blank lines are ignored.

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace slpdigits {

enum class Op : std::uint8_t { add, sub, mul };

std::string_view op_name(Op op) noexcept;

struct Step {
    Op op;
    std::uint32_t lhs;  // index j, 1-based
    std::uint32_t rhs;  // index k, 1-based

    friend bool operator==(const Step&, const Step&) = default;
};

// Immutable once constructed; safe to share between threads.
class SlpProgram {
public:
    // The empty computation, n = s2 = 1.
    SlpProgram();

    // Throws MalformedProgram if any step references an index that is not yet
    // defined (line numbers in the message are step positions + 1).
    explicit SlpProgram(std::vector<Step> steps);

    std::span<const Step> steps() const noexcept { return steps_; }

    // L = 2 + number of steps.
    std::size_t length() const noexcept { return steps_.size() + 2; }

    // Register plan: value i (1-based) lives in slot slot_of(i). Slots are
    // reused once a value has seen its last use, so evaluation holds
    // slot_count() residues rather than L.
    std::uint32_t slot_of(std::size_t index) const noexcept { return slots_[index - 1]; }
    std::uint32_t slot_count() const noexcept { return slot_count_; }

    friend bool operator==(const SlpProgram& a, const SlpProgram& b) { return a.steps_ == b.steps_; }

private:
    void assign_slots();

    std::vector<Step> steps_;
    std::vector<std::uint32_t> slots_;
    std::uint32_t slot_count_ = 0;
};

SlpProgram parse_slp(std::string_view text);
SlpProgram parse_slp(std::istream& in);
std::string serialize_slp(const SlpProgram& prog);

// a^t by building a from its binary digits, then square-and-multiply on t.
SlpProgram gen_power_slp(std::uint64_t a, std::uint64_t t);

// n mod N, normalised to [0, N).
mpz_class eval_mod(const SlpProgram& prog, const mpz_class& modulus);
std::uint64_t eval_mod(const SlpProgram& prog, std::uint64_t modulus);

inline constexpr std::uint64_t kDefaultSizeCapBits = std::uint64_t{1} << 26;

// Upper bound on bit length of every intermediate, without evaluating.
std::uint64_t bit_length_bound(const SlpProgram& prog);

// Exact n. Throws SizeCapExceeded if bit_length_bound exceeds the cap, and
// ValueNotPositive if n <= 0.
mpz_class eval_exact(const SlpProgram& prog, std::uint64_t size_cap_bits = kDefaultSizeCapBits);

// Number of base-b digits of n, which trivially satisfies 1/2 < A/d < 2.
std::uint64_t estimate_digit_count(const SlpProgram& prog, std::uint32_t base,
                                   std::uint64_t size_cap_bits = kDefaultSizeCapBits);

// Exact base-b digit count of a positive integer.
std::uint64_t digit_count(const mpz_class& n, std::uint32_t base);

}  // namespace slpdigits
