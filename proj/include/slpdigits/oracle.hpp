#pragma once

// Exact reference computations for tests and verification. These evaluate n
// in full and work in exact rational arithmetic, so they are only usable at
// desk scale and must stay off the extraction path.

#include "slpdigits/plan.hpp"
#include "slpdigits/slp.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace slpdigits::oracle {

// Canonical (reduced, positive denominator) rational.
using ExactRational = mpq_class;

// {n / b^m} = (n mod b^m) / b^m.
ExactRational exact_nu(const SlpProgram& prog, std::uint32_t b, std::uint64_t m);

// First `count` base-b digits of {n / b^m}.
std::vector<std::uint32_t> exact_nu_digits(const SlpProgram& prog, std::uint32_t b, std::uint64_t m,
                                           std::size_t count);

// Distance between x and y on the circle R/Z, in [0, 1/2].
ExactRational circle_distance(const ExactRational& x, const ExactRational& y);

// prod_{h=1..T, h != j} (j - h), multiplied out directly.
mpz_class lagrange_denominator(std::uint64_t T, std::uint64_t j);

// Partial-fraction numerator A_j = n a^r H_j / prod_{h != j} (j - h), with
// H_j taken from the direct expansion. Throws ContractViolation if
// |A_j| > n T a^S 4^T.
ExactRational exact_Aj(const ExtractionPlan& plan, const SlpProgram& prog, std::uint64_t j);

// All A_1..A_T for a known n (avoids re-evaluating the program).
std::vector<ExactRational> exact_A(const ExtractionPlan& plan, const mpz_class& n);

// B_i = sum_j A_j j^(i-1).
ExactRational power_sum(const std::vector<ExactRational>& A, std::uint64_t i);

// {b^mu A_j / (a^S - j)}.
ExactRational exact_term_fraction(const ExtractionPlan& plan, const SlpProgram& prog, std::uint64_t j);

// E = b^mu n / a^t - sum_j b^mu A_j / (a^S - j), signed. T <= 12 only.
ExactRational reconstruction_error_signed(const ExtractionPlan& plan, const SlpProgram& prog);

// |E|; throws ContractViolation unless |E| < b^-(y+2).
ExactRational reconstruction_error(const ExtractionPlan& plan, const SlpProgram& prog);

// Inverse of the T x T matrix M[i][j] = j^(i-1) by exact Gauss-Jordan
// elimination (0-based indexing in the result).
std::vector<std::vector<ExactRational>> vandermonde_inverse(std::uint64_t T);

}  // namespace slpdigits::oracle
