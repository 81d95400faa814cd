#include "slpdigits/extract.hpp"

#include "slpdigits/coeff.hpp"
#include "slpdigits/errors.hpp"
#include "slpdigits/workspace.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <exception>
#include <stdexcept>
#include <thread>

namespace slpdigits {
namespace {

std::uint64_t bits_of(const mpz_class& x) {
    return sgn(x) == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2);
}

std::uint64_t limbs_of(const mpz_class& x) {
    return std::max<std::uint64_t>(1, mpz_size(x.get_mpz_t()));
}

// Coefficients are computed this many terms at a time.
std::uint64_t batch_size(std::uint64_t T) {
    return std::max<std::uint64_t>(1, T / std::bit_width(T));
}

// Computes the terms j = first..last of one contiguous range. Holds a^S, the
// running factorial product (j-1)!(T-j)! and a batch of coefficients.
class TermWorker {
public:
    TermWorker(const ExtractionPlan& plan, const SlpProgram& prog, const PrimeBudget& budget, std::uint64_t first,
               std::uint64_t last)
        : plan_(plan), prog_(prog), budget_(budget), next_j_(first), last_j_(last), batch_first_(first) {
        mpz_ui_pow_ui(radix_power_.get_mpz_t(), plan.radix, plan.block);
        mpz_class f;
        mpz_fac_ui(factorials_.get_mpz_t(), first - 1);
        mpz_fac_ui(f.get_mpz_t(), plan.terms - first);
        factorials_ *= f;
        note(radix_power_);
        note(budget.delta);
    }

    TermResult next() {
        const auto j = next_j_++;
        TermResult result{j, term(j)};
        if (j < plan_.terms) {
            // (j-1)!(T-j)!  ->  j!(T-j-1)!
            factorials_ *= j;
            mpz_divexact_ui(factorials_.get_mpz_t(), factorials_.get_mpz_t(), plan_.terms - j);
        }
        return result;
    }

    std::uint64_t max_operand_bits() const noexcept { return max_bits_; }

private:
    void note(const mpz_class& x) { max_bits_ = std::max(max_bits_, bits_of(x)); }

    void mul_mod_into(mpz_class& acc, const mpz_class& factor, const mpz_class& modulus) {
        acc *= factor;
        note(acc);
        mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), modulus.get_mpz_t());
        workspace::add_mod_muls(limbs_of(modulus));
    }

    FixedFraction term(std::uint64_t j) {
        const mpz_class q = radix_power_ - j;
        const mpz_class v = factorials_ * q;
        note(v);

        if (j - batch_first_ >= batch_.size()) {
            batch_first_ = j;
            batch_.clear();
            batch_ = coeff_crt_batch(plan_.terms, plan_.block_count, j,
                                     std::min(last_j_, j + batch_size(plan_.terms) - 1), budget_);
        }
        const auto& coefficient = batch_[j - batch_first_];
        if (sgn(coefficient) == 0) {
            return FixedFraction::zero(plan_.base, std::size_t{plan_.working_digits} + 1);
        }

        mpz_class u = eval_mod(prog_, v);
        mul_mod_into(u, mod_pow(plan_.radix, plan_.padding, v), v);
        mpz_class h;
        mpz_mod(h.get_mpz_t(), coefficient.get_mpz_t(), v.get_mpz_t());
        mul_mod_into(u, h, v);
        if ((plan_.terms - j) % 2 == 1 && sgn(u) != 0) {
            u = v - u;
        }
        mpz_class shift;
        mpz_import(shift.get_mpz_t(), 1, -1, sizeof plan_.shift, 0, 0, &plan_.shift);
        mul_mod_into(u, mod_pow(plan_.base, shift, v), v);
        return frac_from_ratio(u, v, plan_.base, plan_.working_digits);
    }

    const ExtractionPlan& plan_;
    const SlpProgram& prog_;
    const PrimeBudget& budget_;
    std::uint64_t next_j_;
    std::uint64_t last_j_;
    std::uint64_t batch_first_;
    std::vector<mpz_class> batch_;
    mpz_class radix_power_;
    mpz_class factorials_;
    std::uint64_t max_bits_ = 0;
};

// t = S k - r, 1 <= k <= T and the precision rule: enough for every step of a
// single term to be well defined and exact.
void require_consistent(const ExtractionPlan& plan) {
    if (plan.block < 1 || plan.terms < 1 || plan.block_count < 1 || plan.block_count > plan.terms ||
        plan.block * plan.block_count - plan.padding != plan.exponent || plan.padding >= plan.block ||
        plan.working_digits != plan.level + floor_log(plan.terms, plan.base) + 3) {
        throw ContractViolation("inconsistent extraction plan");
    }
}

void require_runnable(const ExtractionPlan& plan) {
    if (plan.zero_shortcut) {
        return;
    }
    if (auto bad = plan_violations(plan); !bad.empty()) {
        throw ContractViolation("invalid extraction plan: " + bad.front());
    }
}

struct RangeOutcome {
    FixedFraction sum;
    std::uint64_t max_operand_bits = 0;
    std::uint64_t mod_muls = 0;
    std::exception_ptr error;
};

void run_range(const ExtractionPlan& plan, const SlpProgram& prog, const PrimeBudget& budget, std::uint64_t first,
               std::uint64_t last, RangeOutcome& out) {
    const auto muls_before = workspace::thread_mod_muls();
    try {
        TermWorker worker(plan, prog, budget, first, last);
        for (auto j = first; j <= last; ++j) {
            out.sum = frac_add_mod1(out.sum, worker.next().tau);
        }
        out.max_operand_bits = worker.max_operand_bits();
    } catch (...) {
        out.error = std::current_exception();
    }
    out.mod_muls = workspace::thread_mod_muls() - muls_before;
}

}  // namespace

DigitInference infer_digit(const FixedFraction& gamma, std::uint32_t y) {
    if (gamma.size() != std::size_t{y} + 1) {
        throw ContractViolation("infer_digit needs exactly y+1 digits");
    }
    const auto d = gamma.digits();
    const auto top = gamma.base() - 1;
    // Remainder after the leading digit is R / b^(y+1) with R in [0, b^y);
    // ambiguous iff R < b or R > b^y - b.
    const bool low = std::all_of(d.begin() + 1, d.begin() + y, [](auto x) { return x == 0; });
    const bool high = std::all_of(d.begin() + 1, d.begin() + y, [top](auto x) { return x == top; }) && d[y] > 0;
    return {d[0], low || high};
}

TermResult compute_term(const ExtractionPlan& plan, const SlpProgram& prog, std::uint64_t j) {
    if (plan.zero_shortcut) {
        throw ContractViolation("compute_term called on a zero-shortcut plan");
    }
    require_consistent(plan);
    if (j < 1 || j > plan.terms) {
        throw std::invalid_argument("term index must lie in [1, T]");
    }
    const auto budget = primes_to_threshold(plan.terms);
    TermWorker worker(plan, prog, budget, j, j);
    return worker.next();
}

DigitReport extract_digits(const ExtractionPlan& plan, const SlpProgram& prog, unsigned workers) {
    require_runnable(plan);
    const auto start = std::chrono::steady_clock::now();
    const auto baseline = workspace::reset_peak();

    if (plan.zero_shortcut) {
        // nu < b^-(y+1), so the leading digit is certainly 0.
        return DigitReport{FixedFraction::zero(plan.base, std::size_t{plan.level} + 1), 0, false, false, true, {}};
    }

    const auto budget = primes_to_threshold(plan.terms);
    const auto M = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, plan.terms));
    const auto digits = std::size_t{plan.working_digits} + 1;

    std::vector<RangeOutcome> outcomes(M, RangeOutcome{FixedFraction::zero(plan.base, digits), 0, 0, nullptr});
    std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
    for (unsigned w = 0; w < M; ++w) {
        const auto first = plan.terms * w / M + 1;
        const auto last = plan.terms * (w + 1) / M;
        ranges.emplace_back(first, last);
    }

    if (M == 1) {
        run_range(plan, prog, budget, 1, plan.terms, outcomes[0]);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(M);
        for (unsigned w = 0; w < M; ++w) {
            pool.emplace_back([&, w] { run_range(plan, prog, budget, ranges[w].first, ranges[w].second, outcomes[w]); });
        }
    }

    auto sum = FixedFraction::zero(plan.base, digits);
    ExtractionStats stats;
    for (auto& out : outcomes) {
        if (out.error) {
            std::rethrow_exception(out.error);
        }
        sum = frac_add_mod1(sum, out.sum);
        stats.max_operand_bits = std::max(stats.max_operand_bits, out.max_operand_bits);
        stats.mod_mul_count += out.mod_muls;
    }

    auto rounded = round_to_digits(sum, plan.level);
    const auto inference = infer_digit(rounded.value, plan.level);

    stats.block = plan.block;
    stats.terms = plan.terms;
    stats.block_count = plan.block_count;
    stats.largest_prime = budget.largest;
    stats.prime_count = budget.count;
    stats.term_count = plan.terms;
    stats.workers = M;
    stats.peak_workspace_bits = workspace::peak_bits_since(baseline);
    stats.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    return DigitReport{std::move(rounded.value), inference.digit, inference.ambiguous, rounded.wrapped, false, stats};
}

}  // namespace slpdigits
