#pragma once

// Text forms of dyadic values.
//
//   hex      [+-]0xHHH[p[+-]E]   mantissa 0xHHH times 2^E
//   integer  [+-]DDD             decimal integer
//   binary   [+-]BBB.BBB         binary point notation, as printed by format_bin
//
// Binary and hex output parse back to the same value; decimal output is for
// display only.

#include <cctype>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "linexp/bignum/dyadic.hpp"

namespace linexp {

class parse_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class TextFormat { bin, hex, dec };

/// Largest |E| accepted in the hex form.
inline constexpr std::ptrdiff_t kMaxTextExponent = std::ptrdiff_t{1} << 24;

namespace detail {

inline bool all_of(std::string_view s, int (*pred)(int)) {
    for (char c : s) {
        if (pred(static_cast<unsigned char>(c)) == 0) {
            return false;
        }
    }
    return true;
}

inline int is_binary_digit(int c) { return static_cast<int>(c == '0' || c == '1'); }

inline Dyadic apply_sign(Dyadic v, bool negative) { return negative ? -v : v; }

}  // namespace detail

inline Dyadic parse_dyadic(std::string_view text) {
    const std::string original(text);
    auto fail = [&](const char* why) { return parse_error("cannot parse '" + original + "' as a dyadic: " + why); };
    bool negative = false;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    if (text.empty()) {
        throw fail("empty");
    }

    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        text.remove_prefix(2);
        const std::size_t p = text.find_first_of("pP");
        const std::string_view digits = text.substr(0, p);
        if (digits.empty() || !detail::all_of(digits, isxdigit)) {
            throw fail("bad hex mantissa");
        }
        std::ptrdiff_t exponent = 0;
        if (p != std::string_view::npos) {
            std::string_view e = text.substr(p + 1);
            bool eneg = false;
            if (!e.empty() && (e.front() == '+' || e.front() == '-')) {
                eneg = e.front() == '-';
                e.remove_prefix(1);
            }
            if (e.empty() || e.size() > 18 || !detail::all_of(e, isdigit)) {
                throw fail("bad binary exponent");
            }
            exponent = std::stoll(std::string(e));
            if (exponent > kMaxTextExponent) {
                throw fail("binary exponent too large");
            }
            if (eneg) {
                exponent = -exponent;
            }
        }
        const Dyadic mantissa(Integer::parse(std::string(digits), 16), 0);
        return detail::apply_sign(mantissa.ldexp(exponent), negative);
    }

    const std::size_t dot = text.find('.');
    if (dot != std::string_view::npos) {
        const std::string_view whole = text.substr(0, dot);
        const std::string_view frac = text.substr(dot + 1);
        if ((whole.empty() && frac.empty()) || !detail::all_of(whole, detail::is_binary_digit) ||
            !detail::all_of(frac, detail::is_binary_digit)) {
            throw fail("a literal with a point must be binary (use 0x...p-E for exact values)");
        }
        const std::string bits = std::string(whole) + std::string(frac);
        Integer mantissa;
        for (char c : bits) {
            mantissa = (mantissa << 1) + Integer(c - '0');
        }
        return detail::apply_sign(Dyadic(mantissa, frac.size()), negative);
    }

    if (!detail::all_of(text, isdigit)) {
        throw fail("expected a decimal integer, a hex form 0xHHHpE or binary digits with a point");
    }
    return detail::apply_sign(Dyadic(Integer::parse(std::string(text), 10), 0), negative);
}

/// Binary point notation with exactly `bits` fractional digits (truncated
/// toward zero, zero-padded).
inline std::string format_bin(const Dyadic& x, std::size_t bits) {
    const Dyadic t = truncate_at(x, bits).rescaled(bits);
    const Integer mag = t.mantissa().abs();
    std::string out = t.sign() < 0 ? "-" : "";
    const Integer whole = mag >> bits;
    if (whole.is_zero()) {
        out += '0';
    } else {
        std::string w;
        for (std::size_t i = whole.bit_length(); i-- > 0;) {
            w += whole.test_bit(i) ? '1' : '0';
        }
        out += w;
    }
    // The point is always written so the text reads back as binary.
    out += '.';
    for (std::size_t i = bits; i-- > 0;) {
        out += mag.test_bit(i) ? '1' : '0';
    }
    return out;
}

/// 0x<hex mantissa>p-<bits>, truncated toward zero at `bits` fractional bits.
inline std::string format_hex(const Dyadic& x, std::size_t bits) {
    const Dyadic t = truncate_at(x, bits).rescaled(bits);
    std::string out = t.sign() < 0 ? "-0x" : "0x";
    out += t.mantissa().abs().to_string(16);
    out += "p-" + std::to_string(bits);
    return out;
}

/// Decimal rendering of the value truncated at `bits` fractional bits, with
/// ceil(bits log10(2)) decimal places, each truncated toward zero.
inline std::string format_dec(const Dyadic& x, std::size_t bits) {
    const Dyadic t = truncate_at(x, bits).rescaled(bits);
    const Integer mag = t.mantissa().abs();
    const auto places = static_cast<std::size_t>(std::ceil(static_cast<double>(bits) * 0.30102999566398120));
    std::string out = t.sign() < 0 ? "-" : "";
    out += (mag >> bits).to_string(10);
    if (places > 0) {
        const Integer frac = mag.low_bits(bits) * pow(Integer(10), places);
        std::string digits = (frac >> bits).to_string(10);
        out += '.';
        out += std::string(places - digits.size(), '0');
        out += digits;
    }
    return out;
}

inline std::string format_dyadic(const Dyadic& x, std::size_t bits, TextFormat format) {
    switch (format) {
        case TextFormat::hex:
            return format_hex(x, bits);
        case TextFormat::dec:
            return format_dec(x, bits);
        default:
            return format_bin(x, bits);
    }
}

}  // namespace linexp
