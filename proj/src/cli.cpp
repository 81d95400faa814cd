#include "slpdigits/cli.hpp"

#include "slpdigits/errors.hpp"
#include "slpdigits/oracle.hpp"
#include "slpdigits/workspace.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <mpfr.h>

#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace slpdigits::cli {
namespace {

std::uint64_t parse_u64(std::string_view tok, const std::string& what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(0, "invalid " + what + ": '" + std::string(tok) + "'");
    }
    return v;
}

std::string digit_symbol(std::uint32_t d, std::uint32_t base) {
    if (base <= 36) {
        return std::string(1, static_cast<char>(d < 10 ? '0' + d : 'A' + (d - 10)));
    }
    return std::to_string(d);
}

SlpProgram load_program(const RunConfig& cfg) {
    if (cfg.power) {
        return gen_power_slp(cfg.power->a, cfg.power->t);
    }
    std::ifstream in(*cfg.slp_path);
    if (!in) {
        throw ParseError(0, "cannot open " + *cfg.slp_path);
    }
    return parse_slp(in);
}

std::uint64_t digits_for(const RunConfig& cfg, const SlpProgram& prog) {
    if (cfg.digits_approx) {
        return *cfg.digits_approx;
    }
    if (cfg.power) {
        return power_digit_count(cfg.power->a, cfg.power->t, cfg.base);
    }
    return estimate_digit_count(prog, cfg.base, cfg.size_cap_bits);
}

int cmd_digit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto prog = load_program(cfg);
    const auto A = digits_for(cfg, prog);
    const auto plan = make_plan(cfg.base, cfg.digit_index, cfg.level, A);
    const auto report = extract_digits(plan, prog, cfg.workers);

    out << (cfg.json ? format_json_report(report) : format_text_report(report, cfg.base)) << '\n';

    if (cfg.verify) {
        const auto nu = oracle::exact_nu(prog, cfg.base, cfg.digit_index);
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), cfg.base, std::uint64_t{cfg.level} + 1);
        const oracle::ExactRational gamma(report.gamma.scaled(), scale);
        mpz_class radius;
        mpz_ui_pow_ui(radius.get_mpz_t(), cfg.base, cfg.level);
        const bool close = oracle::circle_distance(gamma, nu) < oracle::ExactRational(1, radius);
        const auto true_digit = oracle::exact_nu_digits(prog, cfg.base, cfg.digit_index, 1).front();
        const bool digit_ok = report.ambiguous || true_digit == report.digit;
        if (!close || !digit_ok) {
            err << "verify: MISMATCH (exact leading digit " << digit_symbol(true_digit, cfg.base) << ")\n";
            return kVerifyMismatch;
        }
        if (!cfg.json) {
            out << "verify=ok\n";
        }
    }
    return kOk;
}

int cmd_gen_slp(const RunConfig& cfg, std::ostream& out) {
    out << serialize_slp(gen_power_slp(cfg.power->a, cfg.power->t));
    return kOk;
}

std::vector<std::uint64_t> parse_list(const std::string& text, const std::string& what) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) {
            out.push_back(parse_u64(tok, what));
        }
    }
    if (out.empty()) {
        throw ParseError(0, "empty " + what + " list");
    }
    return out;
}

}  // namespace

PowerSpec parse_power_spec(const std::string& text) {
    const auto caret = text.find('^');
    if (caret == std::string::npos) {
        throw ParseError(0, "power spec must look like a^t, got '" + text + "'");
    }
    PowerSpec spec{parse_u64(std::string_view(text).substr(0, caret), "power base"),
                   parse_u64(std::string_view(text).substr(caret + 1), "power exponent")};
    if (spec.a < 2 || spec.t < 1) {
        throw ParseError(0, "power spec needs a >= 2 and t >= 1");
    }
    return spec;
}

std::uint64_t power_digit_count(std::uint64_t a, std::uint64_t t, std::uint32_t b) {
    constexpr double kExactBits = 1 << 16;
    if (static_cast<double>(t) * std::log2(static_cast<double>(a)) <= kExactBits) {
        mpz_class n;
        mpz_ui_pow_ui(n.get_mpz_t(), a, t);
        return digit_count(n, b);
    }
    // d = floor(t log_b a) + 1, up to an off-by-one that the factor-2 slack absorbs.
    mpfr_t x, y;
    mpfr_inits2(256, x, y, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_ui(x, a, MPFR_RNDN);
    mpfr_log(x, x, MPFR_RNDN);
    mpfr_mul_ui(x, x, t, MPFR_RNDN);
    mpfr_set_ui(y, b, MPFR_RNDN);
    mpfr_log(y, y, MPFR_RNDN);
    mpfr_div(x, x, y, MPFR_RNDN);
    const auto d = mpfr_get_ui(x, MPFR_RNDD) + 1;
    mpfr_clears(x, y, static_cast<mpfr_ptr>(nullptr));
    return d;
}

BenchRow bench_point(std::uint64_t a, std::uint32_t b, std::uint64_t t, std::uint64_t m, std::uint32_t y,
                     unsigned workers) {
    const auto prog = gen_power_slp(a, t);
    const auto plan = make_plan(b, m, y, power_digit_count(a, t, b));
    const auto report = extract_digits(plan, prog, workers);
    return BenchRow{t,
                    y,
                    report.stats.workers ? report.stats.workers : workers,
                    report.stats.elapsed_ms,
                    report.stats.peak_workspace_bits,
                    report.stats.mod_mul_count,
                    report.gamma.digit_string()};
}

std::string format_csv_row(const BenchRow& row) {
    std::ostringstream out;
    out << row.t << ',' << row.y << ',' << row.workers << ',' << std::fixed << std::setprecision(3) << row.elapsed_ms
        << ',' << row.peak_workspace_bits << ',' << row.mod_mul_count;
    return out.str();
}

std::string format_text_report(const DigitReport& report, std::uint32_t base) {
    std::ostringstream out;
    const auto& s = report.stats;
    out << "gamma=0." << report.gamma.digit_string() << " (base " << base << ")\n";
    out << "digit=" << digit_symbol(report.digit, base) << " ambiguous=" << (report.ambiguous ? "yes" : "no")
        << " wrapped=" << (report.wrapped ? "yes" : "no") << (report.zero_shortcut ? " zero_shortcut=yes" : "")
        << '\n';
    out << "S=" << s.block << " T=" << s.terms << " k=" << s.block_count << " P=" << s.largest_prime
        << " prime_count=" << s.prime_count << " max_operand_bits=" << s.max_operand_bits << " elapsed_ms=" << std::fixed
        << std::setprecision(3) << s.elapsed_ms << " workers=" << s.workers;
    return out.str();
}

std::string format_json_report(const DigitReport& report) {
    const auto& s = report.stats;
    nlohmann::json j{
        {"gamma_digits", report.gamma.digit_string()},
        {"inferred_digit", report.digit},
        {"ambiguous", report.ambiguous},
        {"wrapped", report.wrapped},
        {"S", s.block},
        {"T", s.terms},
        {"k", s.block_count},
        {"P", s.largest_prime},
        {"prime_count", s.prime_count},
        {"max_operand_bits", s.max_operand_bits},
        {"elapsed_ms", s.elapsed_ms},
        {"workers", s.workers},
    };
    return j.dump();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Base-b digits of integers given by straight-line programs"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string pow_text;
    std::string format = "text";

    auto* digit = app.add_subcommand("digit", "Level-y approximation of {n / b^m} and the m-th digit of n");
    auto* pow_opt = digit->add_option("--pow", pow_text, "Use n = a^t, written a^t");
    auto* slp_opt = digit->add_option("--slp", cfg.slp_path, "SLP v1 program file")->check(CLI::ExistingFile);
    pow_opt->excludes(slp_opt);
    digit->add_option("-b,--base", cfg.base, "Base b")->check(CLI::Range(2u, 1u << 30));
    digit->add_option("-m,--digit", cfg.digit_index, "Digit index m (1 = least significant)")
        ->check(CLI::PositiveNumber);
    digit->add_option("-y,--level", cfg.level, "Approximation level y")->check(CLI::PositiveNumber);
    digit->add_option("--digits-approx", cfg.digits_approx, "Approximate digit count A of n (1/2 < A/d < 2)")
        ->check(CLI::PositiveNumber);
    digit->add_option("-M,--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
    digit->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    digit->add_flag("--verify", cfg.verify, "Check the result against exact evaluation");
    digit->add_option("--size-cap", cfg.size_cap_bits, "Bit cap for exact evaluation");

    auto* gen = app.add_subcommand("gen-slp", "Print an SLP v1 program for a^t");
    gen->add_option("--pow", pow_text, "a^t")->required();

    std::string t_grid = "1000,10000,100000,1000000";
    std::string worker_grid = "1";
    std::uint64_t bench_a = 2;
    std::uint64_t bench_m = 0;
    std::uint32_t bench_y = 1;
    auto* bench = app.add_subcommand("bench", "Time and workspace of digit extraction for a^t over a grid of t");
    bench->add_option("--t-grid", t_grid, "Comma-separated exponents t");
    bench->add_option("--workers", worker_grid, "Comma-separated worker counts");
    bench->add_option("-a,--pow-base", bench_a, "Power base a")->check(CLI::Range(std::uint64_t{2}, ~std::uint64_t{0}));
    bench->add_option("-b,--base", cfg.base, "Base b")->check(CLI::Range(2u, 1u << 30));
    bench->add_option("-y,--level", bench_y, "Approximation level y")->check(CLI::PositiveNumber);
    bench->add_option("-m,--digit", bench_m, "Digit index m (default t/2)");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        if (e.get_exit_code() == 0) {
            return kOk;
        }
        return kParseError;
    }

    try {
        if (*digit) {
            cfg.subcommand = "digit";
            cfg.json = format == "json";
            if (!pow_text.empty()) {
                cfg.power = parse_power_spec(pow_text);
            } else if (!cfg.slp_path) {
                throw ParseError(0, "digit needs exactly one of --pow or --slp");
            }
            return cmd_digit(cfg, out, err);
        }
        if (*gen) {
            cfg.subcommand = "gen-slp";
            cfg.power = parse_power_spec(pow_text);
            return cmd_gen_slp(cfg, out);
        }
        if (*bench) {
            out << kBenchCsvHeader << '\n';
            for (auto t : parse_list(t_grid, "t")) {
                for (auto M : parse_list(worker_grid, "worker")) {
                    const auto m = bench_m ? bench_m : std::max<std::uint64_t>(1, t / 2);
                    out << format_csv_row(bench_point(bench_a, cfg.base, t, m, bench_y, static_cast<unsigned>(M)))
                        << '\n'
                        << std::flush;
                }
            }
            return kOk;
        }
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kParseError;
    } catch (const std::invalid_argument& e) {
        err << "invalid argument: " << e.what() << '\n';
        return kParseError;
    } catch (const InfeasiblePlan& e) {
        err << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}

}  // namespace slpdigits::cli
