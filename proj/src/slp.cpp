#include "slpdigits/slp.hpp"

#include "slpdigits/errors.hpp"
#include "slpdigits/workspace.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <istream>
#include <iterator>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace slpdigits {
namespace {

constexpr std::uint32_t kNoLastUse = std::numeric_limits<std::uint32_t>::max();

std::string_view trim(std::string_view s) {
    auto first = s.find_first_not_of(" \t\r\v\f");
    if (first == std::string_view::npos) {
        return {};
    }
    auto last = s.find_last_not_of(" \t\r\v\f");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
            ++i;
        }
        auto start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') {
            ++i;
        }
        if (i > start) {
            out.push_back(s.substr(start, i - start));
        }
    }
    return out;
}

std::uint32_t parse_index(std::string_view tok, std::size_t line) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec == std::errc::result_out_of_range) {
        throw ParseError(line, "index out of range: '" + std::string(tok) + "'");
    }
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(line, "expected an integer index, got '" + std::string(tok) + "'");
    }
    if (value < 1) {
        throw ParseError(line, "index must be >= 1, got " + std::to_string(value));
    }
    if (value > std::numeric_limits<std::uint32_t>::max()) {
        throw ParseError(line, "index out of range: " + std::to_string(value));
    }
    return static_cast<std::uint32_t>(value);
}

Op parse_op(std::string_view tok, std::size_t line) {
    if (tok == "add") {
        return Op::add;
    }
    if (tok == "sub") {
        return Op::sub;
    }
    if (tok == "mul") {
        return Op::mul;
    }
    throw ParseError(line, "unknown opcode '" + std::string(tok) + "'");
}

std::uint64_t limbs_of(const mpz_class& x) {
    return std::max<std::uint64_t>(1, mpz_size(x.get_mpz_t()));
}

}  // namespace

std::string_view op_name(Op op) noexcept {
    switch (op) {
        case Op::add: return "add";
        case Op::sub: return "sub";
        case Op::mul: return "mul";
    }
    return "?";
}

SlpProgram::SlpProgram() { assign_slots(); }

SlpProgram::SlpProgram(std::vector<Step> steps) : steps_(std::move(steps)) {
    for (std::size_t s = 0; s < steps_.size(); ++s) {
        const auto index = s + 3;
        const auto& st = steps_[s];
        if (st.lhs < 1 || st.rhs < 1) {
            throw MalformedProgram(0, "step defining s" + std::to_string(index) + " has index < 1");
        }
        if (st.lhs >= index || st.rhs >= index) {
            throw MalformedProgram(0, "step defining s" + std::to_string(index) +
                                          " makes a forward reference");
        }
    }
    assign_slots();
}

void SlpProgram::assign_slots() {
    const auto L = length();
    std::vector<std::uint32_t> last_use(L + 1, 0);
    for (std::size_t i = 1; i <= L; ++i) {
        last_use[i] = static_cast<std::uint32_t>(i);
    }
    for (std::size_t s = 0; s < steps_.size(); ++s) {
        const auto index = static_cast<std::uint32_t>(s + 3);
        last_use[steps_[s].lhs] = std::max(last_use[steps_[s].lhs], index);
        last_use[steps_[s].rhs] = std::max(last_use[steps_[s].rhs], index);
    }
    last_use[L] = kNoLastUse;

    slots_.assign(L, 0);
    slot_count_ = 0;
    std::vector<std::uint32_t> free_slots;
    auto take = [&] {
        if (!free_slots.empty()) {
            auto s = free_slots.back();
            free_slots.pop_back();
            return s;
        }
        return slot_count_++;
    };

    for (std::uint32_t i = 1; i <= L; ++i) {
        if (i >= 3) {
            const auto& st = steps_[i - 3];
            if (last_use[st.lhs] == i) {
                free_slots.push_back(slots_[st.lhs - 1]);
            }
            if (st.rhs != st.lhs && last_use[st.rhs] == i) {
                free_slots.push_back(slots_[st.rhs - 1]);
            }
        }
        slots_[i - 1] = take();
        if (last_use[i] == i) {
            free_slots.push_back(slots_[i - 1]);
        }
    }
}

SlpProgram parse_slp(std::string_view text) {
    std::vector<Step> steps;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = text.size();
        }
        auto line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            if (eol == text.size()) {
                break;
            }
            continue;
        }

        auto toks = split_ws(line);
        if (!have_header) {
            if (toks.size() != 2 || toks[0] != "slp" || toks[1] != "v1") {
                throw ParseError(line_no, "expected header 'slp v1'");
            }
            have_header = true;
            continue;
        }
        if (toks.size() != 3) {
            throw ParseError(line_no, "expected '<op> <j> <k>'");
        }
        auto op = parse_op(toks[0], line_no);
        auto j = parse_index(toks[1], line_no);
        auto k = parse_index(toks[2], line_no);
        const auto defining = steps.size() + 3;
        if (j >= defining || k >= defining) {
            throw MalformedProgram(line_no, "forward reference: s" + std::to_string(defining) +
                                                " may only use s1..s" + std::to_string(defining - 1));
        }
        steps.push_back({op, j, k});
        if (eol == text.size()) {
            break;
        }
    }
    if (!have_header) {
        throw ParseError(line_no, "missing 'slp v1' header");
    }
    return SlpProgram(std::move(steps));
}

SlpProgram parse_slp(std::istream& in) {
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_slp(std::string_view(text));
}

std::string serialize_slp(const SlpProgram& prog) {
    std::ostringstream out;
    out << "slp v1\n";
    for (const auto& st : prog.steps()) {
        out << op_name(st.op) << ' ' << st.lhs << ' ' << st.rhs << '\n';
    }
    return out.str();
}

SlpProgram gen_power_slp(std::uint64_t a, std::uint64_t t) {
    if (a < 2 || t < 1) {
        throw std::invalid_argument("gen_power_slp requires a >= 2 and t >= 1");
    }
    std::vector<Step> steps;
    auto emit = [&](Op op, std::uint32_t j, std::uint32_t k) {
        steps.push_back({op, j, k});
        return static_cast<std::uint32_t>(steps.size() + 2);
    };

    std::uint32_t base = 2;
    for (int bit = std::bit_width(a) - 2; bit >= 0; --bit) {
        base = emit(Op::add, base, base);
        if ((a >> bit) & 1U) {
            base = emit(Op::add, base, 2);
        }
    }

    std::uint32_t acc = base;
    for (int bit = std::bit_width(t) - 2; bit >= 0; --bit) {
        acc = emit(Op::mul, acc, acc);
        if ((t >> bit) & 1U) {
            acc = emit(Op::mul, acc, base);
        }
    }
    return SlpProgram(std::move(steps));
}

mpz_class eval_mod(const SlpProgram& prog, const mpz_class& modulus) {
    if (modulus < 2) {
        throw std::invalid_argument("eval_mod requires N >= 2");
    }
    std::vector<mpz_class, workspace::CountingAllocator<mpz_class>> reg(prog.slot_count());
    reg[prog.slot_of(1)] = 0;
    reg[prog.slot_of(2)] = 1;
    const auto weight = limbs_of(modulus);
    std::uint64_t muls = 0;

    std::uint32_t index = 2;
    for (const auto& st : prog.steps()) {
        ++index;
        auto& dst = reg[prog.slot_of(index)];
        const auto& x = reg[prog.slot_of(st.lhs)];
        const auto& y = reg[prog.slot_of(st.rhs)];
        switch (st.op) {
            case Op::add:
                mpz_add(dst.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
                if (dst >= modulus) {
                    dst -= modulus;
                }
                break;
            case Op::sub:
                mpz_sub(dst.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
                if (sgn(dst) < 0) {
                    dst += modulus;
                }
                break;
            case Op::mul:
                mpz_mul(dst.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
                mpz_mod(dst.get_mpz_t(), dst.get_mpz_t(), modulus.get_mpz_t());
                muls += weight;
                break;
        }
    }
    workspace::add_mod_muls(muls);
    return reg[prog.slot_of(prog.length())];
}

std::uint64_t eval_mod(const SlpProgram& prog, std::uint64_t modulus) {
    if (modulus < 2) {
        throw std::invalid_argument("eval_mod requires N >= 2");
    }
    std::vector<std::uint64_t> reg(prog.slot_count());
    reg[prog.slot_of(1)] = 0;
    reg[prog.slot_of(2)] = 1;
    std::uint32_t index = 2;
    for (const auto& st : prog.steps()) {
        ++index;
        const auto x = reg[prog.slot_of(st.lhs)];
        const auto y = reg[prog.slot_of(st.rhs)];
        std::uint64_t r = 0;
        switch (st.op) {
            case Op::add: r = x >= modulus - y ? x - (modulus - y) : x + y; break;
            case Op::sub: r = x >= y ? x - y : x + (modulus - y); break;
            case Op::mul:
                r = static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % modulus);
                break;
        }
        reg[prog.slot_of(index)] = r;
    }
    workspace::add_mod_muls(static_cast<std::uint64_t>(
        std::count_if(prog.steps().begin(), prog.steps().end(), [](const Step& s) { return s.op == Op::mul; })));
    return reg[prog.slot_of(prog.length())];
}

std::uint64_t bit_length_bound(const SlpProgram& prog) {
    constexpr auto kSat = std::numeric_limits<std::uint64_t>::max() / 4;
    std::vector<std::uint64_t> bits{0, 1};
    bits.reserve(prog.length());
    std::uint64_t worst = 1;
    for (const auto& st : prog.steps()) {
        auto x = bits[st.lhs - 1];
        auto y = bits[st.rhs - 1];
        std::uint64_t b = st.op == Op::mul ? x + y : std::max(x, y) + 1;
        b = std::min(b, kSat);
        bits.push_back(b);
        worst = std::max(worst, b);
    }
    return worst;
}

mpz_class eval_exact(const SlpProgram& prog, std::uint64_t size_cap_bits) {
    if (auto bound = bit_length_bound(prog); bound > size_cap_bits) {
        throw SizeCapExceeded("program may produce values of up to " + std::to_string(bound) +
                              " bits, above the cap of " + std::to_string(size_cap_bits));
    }
    std::vector<mpz_class> reg(prog.slot_count());
    reg[prog.slot_of(1)] = 0;
    reg[prog.slot_of(2)] = 1;
    std::uint32_t index = 2;
    for (const auto& st : prog.steps()) {
        ++index;
        auto& dst = reg[prog.slot_of(index)];
        const auto& x = reg[prog.slot_of(st.lhs)];
        const auto& y = reg[prog.slot_of(st.rhs)];
        switch (st.op) {
            case Op::add: mpz_add(dst.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t()); break;
            case Op::sub: mpz_sub(dst.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t()); break;
            case Op::mul: mpz_mul(dst.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t()); break;
        }
    }
    mpz_class n = reg[prog.slot_of(prog.length())];
    if (sgn(n) <= 0) {
        throw ValueNotPositive("program denotes " + n.get_str() + ", which is not positive");
    }
    return n;
}

std::uint64_t digit_count(const mpz_class& n, std::uint32_t base) {
    if (base < 2) {
        throw std::invalid_argument("base must be >= 2");
    }
    if (sgn(n) <= 0) {
        throw ValueNotPositive("digit_count needs a positive integer");
    }
    std::uint64_t d = 0;
    if (base <= 62) {
        d = mpz_sizeinbase(n.get_mpz_t(), static_cast<int>(base));
    } else {
        // Guess from the bit length, then correct against exact powers.
        const double per_digit = std::log2(static_cast<double>(base));
        d = static_cast<std::uint64_t>(static_cast<double>(mpz_sizeinbase(n.get_mpz_t(), 2)) / per_digit) + 1;
    }
    mpz_class power;
    for (;;) {
        mpz_ui_pow_ui(power.get_mpz_t(), base, d);
        if (power <= n) {
            ++d;
            continue;
        }
        if (d > 1) {
            mpz_ui_pow_ui(power.get_mpz_t(), base, d - 1);
            if (power > n) {
                --d;
                continue;
            }
        }
        return d;
    }
}

std::uint64_t estimate_digit_count(const SlpProgram& prog, std::uint32_t base, std::uint64_t size_cap_bits) {
    return digit_count(eval_exact(prog, size_cap_bits), base);
}

}  // namespace slpdigits
