#pragma once

// Coefficients of prod_{h=1..T, h != j} (x - h), computed one prime at a time
// with a divide-and-conquer product tree and reassembled by streaming CRT.

#include "slpdigits/modmath.hpp"
#include "slpdigits/workspace.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace slpdigits {

using CoeffVector = std::vector<std::uint64_t, workspace::CountingAllocator<std::uint64_t>>;

// Polynomial over Z/p, constant term first.
struct PolyModP {
    std::uint64_t p = 2;
    CoeffVector coeffs;

    std::size_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    std::uint64_t eval(std::uint64_t x) const;
};

// a * b mod p. Consumes its operands so their storage is released as early as
// possible. Schoolbook for short operands, otherwise an exact convolution via
// NTT over the prime 2^64 - 2^32 + 1.
CoeffVector poly_mul_mod(CoeffVector a, CoeffVector b, std::uint64_t p);

// Reference multiplication, always schoolbook.
CoeffVector poly_mul_schoolbook(const CoeffVector& a, const CoeffVector& b, std::uint64_t p);

// prod_{h != j} (x - h) mod p, 1 <= j <= T, p < 2^32.
PolyModP product_tree_mod_p(std::uint64_t T, std::uint64_t j, std::uint64_t p);

// Coefficient of x^(k-1) of the same product mod p. The top level of the tree
// is never multiplied out: the single coefficient is a dot product of the two
// halves.
std::uint64_t coefficient_mod_p(std::uint64_t T, std::uint64_t k, std::uint64_t j, std::uint64_t p);

// Exact coefficient of x^(k-1) in prod_{h=1..T, h != j} (x - h).
mpz_class coeff_crt(std::uint64_t T, std::uint64_t k, std::uint64_t j);

// Same, reusing a prime budget already computed for T.
mpz_class coeff_crt(std::uint64_t T, std::uint64_t k, std::uint64_t j, const PrimeBudget& budget);

// Coefficients for every j in [j_first, j_last] at once. Each prime builds
// the full product over h = 1..T a single time and divides out (x - j) per
// term, at the cost of one CRT accumulator per j.
std::vector<mpz_class> coeff_crt_batch(std::uint64_t T, std::uint64_t k, std::uint64_t j_first, std::uint64_t j_last,
                                       const PrimeBudget& budget);

// Same coefficient by expanding the product over the integers. Refuses T above
// max_T (SizeCapExceeded).
mpz_class coeff_direct(std::uint64_t T, std::uint64_t k, std::uint64_t j, std::uint64_t max_T = 64);

}  // namespace slpdigits
