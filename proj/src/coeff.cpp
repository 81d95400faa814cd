#include "slpdigits/coeff.hpp"

#include "slpdigits/errors.hpp"
#include "slpdigits/modmath.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace slpdigits {
namespace {

// ---------------------------------------------------------------------------
// NTT over the prime 2^64 - 2^32 + 1.

constexpr std::uint64_t kNttPrime = 0xFFFFFFFF00000001ULL;
constexpr std::uint64_t kEps = 0xFFFFFFFFULL;  // 2^64 mod kNttPrime
constexpr std::uint64_t kGenerator = 7;

inline std::uint64_t reduce128(unsigned __int128 x) noexcept {
    const auto lo = static_cast<std::uint64_t>(x);
    const auto hi = static_cast<std::uint64_t>(x >> 64);
    const auto hi_hi = hi >> 32;
    const auto hi_lo = hi & kEps;
    // 2^96 = -1 and 2^64 = kEps (mod kNttPrime).
    std::uint64_t t0 = 0;
    if (__builtin_sub_overflow(lo, hi_hi, &t0)) {
        t0 -= kEps;
    }
    const std::uint64_t t1 = hi_lo * kEps;
    std::uint64_t t2 = 0;
    if (__builtin_add_overflow(t0, t1, &t2)) {
        t2 += kEps;
    }
    return t2 >= kNttPrime ? t2 - kNttPrime : t2;
}

inline std::uint64_t gmul(std::uint64_t x, std::uint64_t y) noexcept {
    return reduce128(static_cast<unsigned __int128>(x) * y);
}

inline std::uint64_t gadd(std::uint64_t x, std::uint64_t y) noexcept {
    return x >= kNttPrime - y ? x - (kNttPrime - y) : x + y;
}

inline std::uint64_t gsub(std::uint64_t x, std::uint64_t y) noexcept {
    return x >= y ? x - y : x + (kNttPrime - y);
}

std::uint64_t gpow(std::uint64_t base, std::uint64_t exp) noexcept {
    std::uint64_t r = 1;
    while (exp) {
        if (exp & 1U) {
            r = gmul(r, base);
        }
        base = gmul(base, base);
        exp >>= 1U;
    }
    return r;
}

// In-place transform; `inverse` includes the 1/N scaling. Returns the number
// of field multiplications performed.
std::uint64_t ntt(CoeffVector& a, bool inverse) {
    const auto n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        auto bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(a[i], a[j]);
        }
    }
    std::uint64_t muls = 0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        auto w_len = gpow(kGenerator, (kNttPrime - 1) / len);
        if (inverse) {
            w_len = gpow(w_len, kNttPrime - 2);
        }
        for (std::size_t i = 0; i < n; i += len) {
            std::uint64_t w = 1;
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = gmul(a[i + k + len / 2], w);
                a[i + k] = gadd(u, v);
                a[i + k + len / 2] = gsub(u, v);
                w = gmul(w, w_len);
            }
        }
        muls += n;
    }
    if (inverse) {
        const auto n_inv = gpow(n, kNttPrime - 2);
        for (auto& x : a) {
            x = gmul(x, n_inv);
        }
        muls += n;
    }
    return muls;
}

constexpr std::size_t kSchoolbookCutoff = 16;

// Field multiplications for two forward transforms, the pointwise product
// and one inverse transform of length n.
std::uint64_t ntt_cost(std::size_t n) {
    return 3 * n * std::bit_width(n - 1) + 2 * n;
}
constexpr std::uint64_t kLeafSize = 8;

bool convolution_is_exact(std::size_t shorter, std::uint64_t p) {
    const unsigned __int128 bound = static_cast<unsigned __int128>(shorter) * (p - 1) * (p - 1);
    return bound < kNttPrime;
}

// h-value at position i of the list 1..T with j removed.
inline std::uint64_t factor_root(std::uint64_t i, std::uint64_t j) noexcept { return i + 1 < j ? i + 1 : i + 2; }

CoeffVector build_product(std::uint64_t lo, std::uint64_t hi, std::uint64_t j, std::uint64_t p) {
    if (hi - lo <= kLeafSize) {
        CoeffVector poly{1};
        poly.reserve(hi - lo + 1);
        std::uint64_t muls = 0;
        for (auto i = lo; i < hi; ++i) {
            // poly *= (x - h)
            const auto neg_h = (p - factor_root(i, j) % p) % p;
            poly.push_back(0);
            for (auto d = poly.size() - 1; d > 0; --d) {
                poly[d] = (poly[d - 1] + mul_mod(poly[d], neg_h, p)) % p;
            }
            poly[0] = mul_mod(poly[0], neg_h, p);
            muls += poly.size();
        }
        workspace::add_mod_muls(muls);
        return poly;
    }
    const auto mid = lo + (hi - lo) / 2;
    auto left = build_product(lo, mid, j, p);
    auto right = build_product(mid, hi, j, p);
    return poly_mul_mod(std::move(left), std::move(right), p);
}

void check_indices(std::uint64_t T, std::uint64_t j) {
    if (T < 1 || j < 1 || j > T) {
        throw std::invalid_argument("need 1 <= j <= T (T=" + std::to_string(T) + ", j=" + std::to_string(j) + ")");
    }
}

void check_prime(std::uint64_t p) {
    if (p < 2 || p >= (std::uint64_t{1} << 32)) {
        throw std::invalid_argument("product tree primes must lie in [2, 2^32)");
    }
}

}  // namespace

std::uint64_t PolyModP::eval(std::uint64_t x) const {
    std::uint64_t acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = (mul_mod(acc, x % p, p) + *it) % p;
    }
    return acc;
}

CoeffVector poly_mul_schoolbook(const CoeffVector& a, const CoeffVector& b, std::uint64_t p) {
    if (a.empty() || b.empty()) {
        return {};
    }
    CoeffVector out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t k = 0; k < b.size(); ++k) {
            out[i + k] = (out[i + k] + mul_mod(a[i], b[k], p)) % p;
        }
    }
    workspace::add_mod_muls(a.size() * b.size());
    return out;
}

CoeffVector poly_mul_mod(CoeffVector a, CoeffVector b, std::uint64_t p) {
    if (a.empty() || b.empty()) {
        return {};
    }
    const auto shorter = std::min(a.size(), b.size());
    const auto out_len = a.size() + b.size() - 1;
    const auto n = std::bit_ceil(out_len);
    if (shorter <= kSchoolbookCutoff || !convolution_is_exact(shorter, p) ||
        a.size() * b.size() <= ntt_cost(n)) {
        return poly_mul_schoolbook(a, b, p);
    }
    a.resize(n, 0);
    b.resize(n, 0);
    std::uint64_t muls = ntt(a, false) + ntt(b, false);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = gmul(a[i], b[i]);
    }
    muls += n;
    CoeffVector().swap(b);
    muls += ntt(a, true);
    a.resize(out_len);
    for (auto& x : a) {
        x %= p;
    }
    workspace::add_mod_muls(muls);
    return a;
}

PolyModP product_tree_mod_p(std::uint64_t T, std::uint64_t j, std::uint64_t p) {
    check_indices(T, j);
    check_prime(p);
    return PolyModP{p, build_product(0, T - 1, j, p)};
}

std::uint64_t coefficient_mod_p(std::uint64_t T, std::uint64_t k, std::uint64_t j, std::uint64_t p) {
    check_indices(T, j);
    check_prime(p);
    if (k < 1 || k > T) {
        throw std::invalid_argument("need 1 <= k <= T");
    }
    const auto n = T - 1;
    const auto target = k - 1;
    if (n <= kLeafSize) {
        return build_product(0, n, j, p)[target];
    }
    const auto mid = n / 2;
    const auto left = build_product(0, mid, j, p);
    const auto right = build_product(mid, n, j, p);
    // deg(left) = mid, deg(right) = n - mid.
    std::uint64_t acc = 0;
    std::uint64_t muls = 0;
    const auto i_lo = target > n - mid ? target - (n - mid) : 0;
    const auto i_hi = std::min<std::uint64_t>(target, mid);
    for (auto i = i_lo; i <= i_hi; ++i) {
        acc = (acc + mul_mod(left[i], right[target - i], p)) % p;
        ++muls;
    }
    workspace::add_mod_muls(muls);
    return acc;
}

mpz_class coeff_crt(std::uint64_t T, std::uint64_t k, std::uint64_t j) {
    check_indices(T, j);
    if (k < 1 || k > T) {
        throw std::invalid_argument("need 1 <= k <= T");
    }
    return coeff_crt(T, k, j, primes_to_threshold(T));
}

mpz_class coeff_crt(std::uint64_t T, std::uint64_t k, std::uint64_t j, const PrimeBudget& budget) {
    check_indices(T, j);
    if (k < 1 || k > T) {
        throw std::invalid_argument("need 1 <= k <= T");
    }
    CrtAccumulator acc(budget.delta);
    auto primes = budget.stream();
    while (auto p = primes.next()) {
        acc.add(coefficient_mod_p(T, k, j, *p), *p);
    }
    return acc.finalize();
}

std::vector<mpz_class> coeff_crt_batch(std::uint64_t T, std::uint64_t k, std::uint64_t j_first, std::uint64_t j_last,
                                       const PrimeBudget& budget) {
    check_indices(T, j_first);
    check_indices(T, j_last);
    if (j_first > j_last) {
        throw std::invalid_argument("empty term batch");
    }
    if (k < 1 || k > T) {
        throw std::invalid_argument("need 1 <= k <= T");
    }
    std::vector<CrtAccumulator> acc(j_last - j_first + 1, CrtAccumulator(budget.delta));
    auto primes = budget.stream();
    while (auto p = primes.next()) {
        // F = prod_{h=1..T} (x - h); the j-th product is F / (x - j), whose
        // x^(k-1) coefficient is sum_{l=k..T} f_l j^(l-k).
        const auto f = build_product(0, T, T + 1, *p);
        for (auto j = j_first; j <= j_last; ++j) {
            const auto x = j % *p;
            std::uint64_t q = 0;
            for (auto l = T; l >= k; --l) {
                q = (mul_mod(q, x, *p) + f[l]) % *p;
            }
            workspace::add_mod_muls(T - k + 1);
            acc[j - j_first].add(q, *p);
        }
    }
    std::vector<mpz_class> out;
    out.reserve(acc.size());
    for (auto& a : acc) {
        out.push_back(a.finalize());
    }
    return out;
}

mpz_class coeff_direct(std::uint64_t T, std::uint64_t k, std::uint64_t j, std::uint64_t max_T) {
    check_indices(T, j);
    if (k < 1 || k > T) {
        throw std::invalid_argument("need 1 <= k <= T");
    }
    if (T > max_T) {
        throw SizeCapExceeded("coeff_direct is limited to T <= " + std::to_string(max_T));
    }
    std::vector<mpz_class> poly{1};
    for (std::uint64_t h = 1; h <= T; ++h) {
        if (h == j) {
            continue;
        }
        poly.emplace_back(0);
        for (auto d = poly.size() - 1; d > 0; --d) {
            poly[d] = poly[d - 1] - poly[d] * h;
        }
        poly[0] *= -static_cast<long>(h);
    }
    return poly[k - 1];
}

}  // namespace slpdigits
