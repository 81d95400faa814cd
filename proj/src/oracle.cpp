#include "slpdigits/oracle.hpp"

#include "slpdigits/coeff.hpp"
#include "slpdigits/errors.hpp"

#include <stdexcept>
#include <string>

namespace slpdigits::oracle {
namespace {

constexpr std::uint64_t kMaxAuditTerms = 12;

mpz_class pow_ui(std::uint64_t base, std::uint64_t exp) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), base, exp);
    return out;
}

ExactRational make_rational(const mpz_class& num, const mpz_class& den) {
    ExactRational q(num, den);
    q.canonicalize();
    return q;
}

ExactRational frac_part(const ExactRational& x) {
    mpz_class floor_value;
    mpz_fdiv_q(floor_value.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    ExactRational out = x - ExactRational(floor_value);
    out.canonicalize();
    return out;
}

}  // namespace

ExactRational exact_nu(const SlpProgram& prog, std::uint32_t b, std::uint64_t m) {
    const auto n = eval_exact(prog);
    const auto modulus = pow_ui(b, m);
    mpz_class rem;
    mpz_mod(rem.get_mpz_t(), n.get_mpz_t(), modulus.get_mpz_t());
    return make_rational(rem, modulus);
}

std::vector<std::uint32_t> exact_nu_digits(const SlpProgram& prog, std::uint32_t b, std::uint64_t m,
                                           std::size_t count) {
    const auto nu = exact_nu(prog, b, m);
    mpz_class num = nu.get_num();
    const mpz_class& den = nu.get_den();
    std::vector<std::uint32_t> digits;
    digits.reserve(count);
    mpz_class q;
    for (std::size_t i = 0; i < count; ++i) {
        num *= b;
        mpz_fdiv_qr(q.get_mpz_t(), num.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        digits.push_back(static_cast<std::uint32_t>(q.get_ui()));
    }
    return digits;
}

ExactRational circle_distance(const ExactRational& x, const ExactRational& y) {
    auto d = frac_part(x - y);
    ExactRational other = ExactRational(1) - d;
    return d < other ? d : other;
}

mpz_class lagrange_denominator(std::uint64_t T, std::uint64_t j) {
    mpz_class out = 1;
    for (std::uint64_t h = 1; h <= T; ++h) {
        if (h != j) {
            out *= mpz_class(static_cast<long>(j) - static_cast<long>(h));
        }
    }
    return out;
}

std::vector<ExactRational> exact_A(const ExtractionPlan& plan, const mpz_class& n) {
    const auto T = plan.terms;
    const mpz_class scale = n * pow_ui(plan.radix, plan.padding);
    const mpz_class bound = n * T * pow_ui(plan.radix, plan.block) * pow_ui(4, T);
    std::vector<ExactRational> out;
    out.reserve(T);
    for (std::uint64_t j = 1; j <= T; ++j) {
        const auto h = coeff_direct(T, plan.block_count, j);
        auto A = make_rational(scale * h, lagrange_denominator(T, j));
        if (abs(A) > ExactRational(bound)) {
            throw ContractViolation("|A_" + std::to_string(j) + "| exceeds n T a^S 4^T");
        }
        out.push_back(std::move(A));
    }
    return out;
}

ExactRational exact_Aj(const ExtractionPlan& plan, const SlpProgram& prog, std::uint64_t j) {
    if (j < 1 || j > plan.terms) {
        throw std::invalid_argument("term index must lie in [1, T]");
    }
    const auto n = eval_exact(prog);
    const auto h = coeff_direct(plan.terms, plan.block_count, j);
    auto A = make_rational(n * pow_ui(plan.radix, plan.padding) * h, lagrange_denominator(plan.terms, j));
    const mpz_class bound = n * plan.terms * pow_ui(plan.radix, plan.block) * pow_ui(4, plan.terms);
    if (abs(A) > ExactRational(bound)) {
        throw ContractViolation("|A_" + std::to_string(j) + "| exceeds n T a^S 4^T");
    }
    return A;
}

ExactRational power_sum(const std::vector<ExactRational>& A, std::uint64_t i) {
    ExactRational sum = 0;
    for (std::size_t j = 0; j < A.size(); ++j) {
        sum += A[j] * ExactRational(pow_ui(j + 1, i - 1));
    }
    sum.canonicalize();
    return sum;
}

ExactRational exact_term_fraction(const ExtractionPlan& plan, const SlpProgram& prog, std::uint64_t j) {
    const auto A = exact_Aj(plan, prog, j);
    const mpz_class pole = pow_ui(plan.radix, plan.block) - j;
    ExactRational gamma = A * ExactRational(pow_ui(plan.base, plan.shift)) / ExactRational(pole);
    return frac_part(gamma);
}

ExactRational reconstruction_error_signed(const ExtractionPlan& plan, const SlpProgram& prog) {
    if (plan.terms > kMaxAuditTerms) {
        throw SizeCapExceeded("reconstruction audit is limited to T <= " + std::to_string(kMaxAuditTerms));
    }
    const auto n = eval_exact(prog);
    const auto A = exact_A(plan, n);
    const mpz_class radix_power = pow_ui(plan.radix, plan.block);
    ExactRational partial = 0;
    for (std::uint64_t j = 1; j <= plan.terms; ++j) {
        partial += A[j - 1] / ExactRational(radix_power - j);
    }
    const ExactRational scale(pow_ui(plan.base, plan.shift));
    ExactRational err = scale * make_rational(n, pow_ui(plan.radix, plan.exponent)) - scale * partial;
    err.canonicalize();
    return err;
}

ExactRational reconstruction_error(const ExtractionPlan& plan, const SlpProgram& prog) {
    ExactRational err = abs(reconstruction_error_signed(plan, prog));
    const auto limit = make_rational(1, pow_ui(plan.base, std::uint64_t{plan.level} + 2));
    if (!(err < limit)) {
        throw ContractViolation("|E| = " + err.get_str() + " is not below b^-(y+2)");
    }
    return err;
}

std::vector<std::vector<ExactRational>> vandermonde_inverse(std::uint64_t T) {
    const auto n = static_cast<std::size_t>(T);
    // Augmented [M | I], M[i][j] = (j+1)^i.
    std::vector<std::vector<ExactRational>> aug(n, std::vector<ExactRational>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            aug[i][j] = ExactRational(pow_ui(j + 1, i));
        }
        aug[i][n + i] = 1;
    }
    for (std::size_t col = 0; col < n; ++col) {
        auto pivot = col;
        while (pivot < n && aug[pivot][col] == 0) {
            ++pivot;
        }
        if (pivot == n) {
            throw std::runtime_error("singular matrix");
        }
        std::swap(aug[col], aug[pivot]);
        const ExactRational inv = ExactRational(1) / aug[col][col];
        for (auto& x : aug[col]) {
            x *= inv;
        }
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || aug[row][col] == 0) {
                continue;
            }
            const ExactRational factor = aug[row][col];
            for (std::size_t k = 0; k < 2 * n; ++k) {
                aug[row][k] -= factor * aug[col][k];
            }
        }
    }
    std::vector<std::vector<ExactRational>> inv(n, std::vector<ExactRational>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            inv[i][j] = aug[i][n + j];
            inv[i][j].canonicalize();
        }
    }
    return inv;
}

}  // namespace slpdigits::oracle
