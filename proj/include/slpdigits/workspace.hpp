#pragma once

// Workspace accounting for the extraction path.
//
// Every GMP limb allocation in the process goes through counting hooks, and
// the coefficient buffers of the polynomial code use CountingAllocator, so
// live/peak byte totals cover all operand storage. Oracle code paths share the
// same counters; callers that want clean numbers (the bench) must not run
// oracles concurrently with a measurement.
//
// Modular multiplications are tallied per thread, limb-weighted: a word-sized
// mulmod counts 1, a big-integer mulmod counts the limb length of its modulus.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <new>

namespace slpdigits::workspace {

// Installs the GMP memory hooks. Called automatically during static
// initialisation of the library; calling it again is a no-op.
void install_gmp_hooks();

void charge(std::size_t bytes) noexcept;
void release(std::size_t bytes) noexcept;

std::int64_t live_bytes() noexcept;
std::int64_t peak_bytes() noexcept;

// Resets the peak to the current live total and returns that baseline.
std::int64_t reset_peak() noexcept;

// Peak above `baseline`, in bits.
std::uint64_t peak_bits_since(std::int64_t baseline) noexcept;

void add_mod_muls(std::uint64_t n) noexcept;
std::uint64_t thread_mod_muls() noexcept;

// Per-thread peak of live polynomial coefficient words.
void charge_coeff_words(std::size_t words) noexcept;
void release_coeff_words(std::size_t words) noexcept;
std::size_t coeff_words_peak() noexcept;
void reset_coeff_words_peak() noexcept;

// std::allocator replacement that reports to the workspace counters. Word-sized
// element types are also tracked as polynomial coefficient storage.
template <typename T>
struct CountingAllocator {
    using value_type = T;

    CountingAllocator() noexcept = default;
    template <typename U>
    CountingAllocator(const CountingAllocator<U>&) noexcept {}

    T* allocate(std::size_t n) {
        if (n > std::numeric_limits<std::size_t>::max() / sizeof(T)) {
            throw std::bad_array_new_length();
        }
        auto* p = static_cast<T*>(::operator new(n * sizeof(T)));
        charge(n * sizeof(T));
        if constexpr (sizeof(T) == sizeof(std::uint64_t)) {
            charge_coeff_words(n);
        }
        return p;
    }

    void deallocate(T* p, std::size_t n) noexcept {
        release(n * sizeof(T));
        if constexpr (sizeof(T) == sizeof(std::uint64_t)) {
            release_coeff_words(n);
        }
        ::operator delete(p);
    }

    template <typename U>
    bool operator==(const CountingAllocator<U>&) const noexcept { return true; }
};

}  // namespace slpdigits::workspace
