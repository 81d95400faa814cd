#include "slpdigits/workspace.hpp"

#include <gmp.h>

#include <cstdlib>
#include <cstring>

namespace slpdigits::workspace {
namespace {

std::atomic<std::int64_t> g_live{0};
std::atomic<std::int64_t> g_peak{0};

thread_local std::uint64_t t_mod_muls = 0;
thread_local std::size_t t_coeff_live = 0;
thread_local std::size_t t_coeff_peak = 0;

void bump_peak(std::int64_t now) noexcept {
    auto peak = g_peak.load(std::memory_order_relaxed);
    while (now > peak && !g_peak.compare_exchange_weak(peak, now, std::memory_order_relaxed)) {
    }
}

void* gmp_alloc(std::size_t n) {
    void* p = std::malloc(n);
    if (!p) {
        std::abort();
    }
    charge(n);
    return p;
}

void* gmp_realloc(void* old, std::size_t old_size, std::size_t new_size) {
    void* p = std::realloc(old, new_size);
    if (!p) {
        std::abort();
    }
    if (new_size > old_size) {
        charge(new_size - old_size);
    } else {
        release(old_size - new_size);
    }
    return p;
}

void gmp_free(void* p, std::size_t n) {
    std::free(p);
    release(n);
}

const bool g_hooks_installed = (install_gmp_hooks(), true);

}  // namespace

void install_gmp_hooks() {
    static const bool once = [] {
        mp_set_memory_functions(&gmp_alloc, &gmp_realloc, &gmp_free);
        return true;
    }();
    (void)once;
    (void)g_hooks_installed;
}

void charge(std::size_t bytes) noexcept {
    auto now = g_live.fetch_add(static_cast<std::int64_t>(bytes), std::memory_order_relaxed) +
               static_cast<std::int64_t>(bytes);
    bump_peak(now);
}

void release(std::size_t bytes) noexcept {
    g_live.fetch_sub(static_cast<std::int64_t>(bytes), std::memory_order_relaxed);
}

std::int64_t live_bytes() noexcept { return g_live.load(std::memory_order_relaxed); }
std::int64_t peak_bytes() noexcept { return g_peak.load(std::memory_order_relaxed); }

std::int64_t reset_peak() noexcept {
    auto now = g_live.load(std::memory_order_relaxed);
    g_peak.store(now, std::memory_order_relaxed);
    return now;
}

std::uint64_t peak_bits_since(std::int64_t baseline) noexcept {
    auto peak = g_peak.load(std::memory_order_relaxed);
    return peak > baseline ? static_cast<std::uint64_t>(peak - baseline) * 8 : 0;
}

void add_mod_muls(std::uint64_t n) noexcept { t_mod_muls += n; }
std::uint64_t thread_mod_muls() noexcept { return t_mod_muls; }

void charge_coeff_words(std::size_t words) noexcept {
    t_coeff_live += words;
    if (t_coeff_live > t_coeff_peak) {
        t_coeff_peak = t_coeff_live;
    }
}

void release_coeff_words(std::size_t words) noexcept {
    t_coeff_live = words > t_coeff_live ? 0 : t_coeff_live - words;
}

std::size_t coeff_words_peak() noexcept { return t_coeff_peak; }
void reset_coeff_words_peak() noexcept { t_coeff_peak = t_coeff_live; }

}  // namespace slpdigits::workspace
