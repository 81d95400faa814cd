#pragma once

#include "slpdigits/extract.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace slpdigits::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kParseError = 2,
    kInfeasible = 3,
    kVerifyMismatch = 4,
};

struct PowerSpec {
    std::uint64_t a = 2;
    std::uint64_t t = 1;
};

// "a^t", e.g. "2^1000".
PowerSpec parse_power_spec(const std::string& text);

// Digit-count approximation for a^t in base b without building a^t at scale.
std::uint64_t power_digit_count(std::uint64_t a, std::uint64_t t, std::uint32_t b);

struct RunConfig {
    std::string subcommand;
    std::uint32_t base = 10;
    std::uint64_t digit_index = 1;
    std::uint32_t level = 4;
    std::optional<std::string> slp_path;
    std::optional<PowerSpec> power;
    std::optional<std::uint64_t> digits_approx;
    unsigned workers = 1;
    bool json = false;
    bool verify = false;
    std::uint64_t size_cap_bits = kDefaultSizeCapBits;
};

struct BenchRow {
    std::uint64_t t = 0;
    std::uint32_t y = 1;
    unsigned workers = 1;
    double elapsed_ms = 0;
    std::uint64_t peak_workspace_bits = 0;
    std::uint64_t mod_mul_count = 0;
    std::string gamma;
};

inline constexpr const char* kBenchCsvHeader = "t,y,M,elapsed_ms,peak_workspace_bits,mod_mul_count";

// One bench grid point: digit m of a^t in base b at level y using M workers.
BenchRow bench_point(std::uint64_t a, std::uint32_t b, std::uint64_t t, std::uint64_t m, std::uint32_t y,
                     unsigned workers);

std::string format_csv_row(const BenchRow& row);
std::string format_text_report(const DigitReport& report, std::uint32_t base);
std::string format_json_report(const DigitReport& report);

// Entry point shared by the executable and the tests. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace slpdigits::cli
