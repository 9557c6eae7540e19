#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "linexp/bignum/limbs.hpp"

namespace linexp {

/// Signed arbitrary-precision integer in sign-magnitude form.
///
/// The magnitude is a little-endian vector of 64-bit limbs with no leading
/// zero limb; zero is the empty magnitude and is never negative. Shifts act on
/// the magnitude, so right shifts truncate toward zero.
class Integer {
public:
    using limb = detail::limb;

    Integer() noexcept = default;

    template <std::integral Int>
    Integer(Int value) {  // NOLINT(google-explicit-constructor)
        if (value == 0) {
            return;
        }
        if constexpr (std::is_signed_v<Int>) {
            negative_ = value < 0;
            auto wide = static_cast<__int128>(value);
            unsigned __int128 mag = negative_ ? static_cast<unsigned __int128>(-wide)
                                              : static_cast<unsigned __int128>(wide);
            mag_.push_back(static_cast<limb>(mag));
        } else {
            mag_.push_back(static_cast<limb>(value));
        }
    }

    static Integer from_limbs(std::vector<limb> magnitude, bool negative = false) {
        Integer r;
        r.mag_ = std::move(magnitude);
        r.negative_ = negative;
        r.trim();
        return r;
    }

    /// 2^bits.
    static Integer power_of_two(std::size_t bits) {
        Integer r;
        r.mag_.assign(bits / detail::kLimbBits + 1, 0);
        r.mag_.back() = limb{1} << (bits % detail::kLimbBits);
        return r;
    }

    /// Parses an optionally signed integer in base 10 or 16 (no prefix).
    static Integer parse(std::string_view text, unsigned base = 10);

    [[nodiscard]] int sign() const noexcept { return mag_.empty() ? 0 : (negative_ ? -1 : 1); }
    [[nodiscard]] bool is_zero() const noexcept { return mag_.empty(); }
    [[nodiscard]] bool is_negative() const noexcept { return negative_; }
    [[nodiscard]] std::size_t limb_count() const noexcept { return mag_.size(); }
    [[nodiscard]] std::span<const limb> limbs() const noexcept { return mag_; }

    [[nodiscard]] std::size_t bit_length() const noexcept {
        if (mag_.empty()) {
            return 0;
        }
        return mag_.size() * detail::kLimbBits - static_cast<std::size_t>(std::countl_zero(mag_.back()));
    }

    /// Number of trailing zero bits of the magnitude; 0 for zero.
    [[nodiscard]] std::size_t trailing_zeros() const noexcept {
        for (std::size_t i = 0; i < mag_.size(); ++i) {
            if (mag_[i] != 0) {
                return i * detail::kLimbBits + static_cast<std::size_t>(std::countr_zero(mag_[i]));
            }
        }
        return 0;
    }

    [[nodiscard]] bool test_bit(std::size_t i) const noexcept {
        const std::size_t li = i / detail::kLimbBits;
        return li < mag_.size() && ((mag_[li] >> (i % detail::kLimbBits)) & 1U) != 0;
    }

    /// |x| mod 2^bits, returned non-negative.
    [[nodiscard]] Integer low_bits(std::size_t bits) const {
        const std::size_t full = bits / detail::kLimbBits;
        const unsigned rest = bits % detail::kLimbBits;
        std::vector<limb> out(mag_.begin(), mag_.begin() + static_cast<std::ptrdiff_t>(std::min(full, mag_.size())));
        if (rest != 0 && full < mag_.size()) {
            out.push_back(mag_[full] & ((limb{1} << rest) - 1));
        }
        return from_limbs(std::move(out));
    }

    /// Value as int64; only meaningful when it fits.
    [[nodiscard]] std::int64_t to_int64() const noexcept {
        if (mag_.empty()) {
            return 0;
        }
        auto v = static_cast<std::int64_t>(mag_[0]);
        return negative_ ? -v : v;
    }

    [[nodiscard]] bool fits_int64() const noexcept {
        if (mag_.size() > 1) {
            return false;
        }
        if (mag_.empty()) {
            return true;
        }
        return mag_[0] <= static_cast<limb>(std::numeric_limits<std::int64_t>::max());
    }

    /// Approximate conversion, for diagnostics and statistics only.
    [[nodiscard]] double to_double() const noexcept {
        double r = 0.0;
        for (std::size_t i = mag_.size(); i-- > 0;) {
            r = r * 18446744073709551616.0 + static_cast<double>(mag_[i]);
        }
        return negative_ ? -r : r;
    }

    [[nodiscard]] std::string to_string(unsigned base = 10) const;

    [[nodiscard]] Integer abs() const {
        Integer r = *this;
        r.negative_ = false;
        return r;
    }

    Integer operator-() const {
        Integer r = *this;
        if (!r.mag_.empty()) {
            r.negative_ = !r.negative_;
        }
        return r;
    }

    friend bool operator==(const Integer& a, const Integer& b) noexcept {
        return a.negative_ == b.negative_ && a.mag_ == b.mag_;
    }

    friend std::strong_ordering operator<=>(const Integer& a, const Integer& b) noexcept {
        if (a.sign() != b.sign()) {
            return a.sign() <=> b.sign();
        }
        int c = detail::compare(a.mag_.data(), a.mag_.size(), b.mag_.data(), b.mag_.size());
        if (a.negative_) {
            c = -c;
        }
        return c <=> 0;
    }

    /// Compares magnitudes.
    static int compare_abs(const Integer& a, const Integer& b) noexcept {
        return detail::compare(a.mag_.data(), a.mag_.size(), b.mag_.data(), b.mag_.size());
    }

    friend Integer operator+(const Integer& a, const Integer& b) { return add_signed(a, b, false); }
    friend Integer operator-(const Integer& a, const Integer& b) { return add_signed(a, b, true); }
    friend Integer operator*(const Integer& a, const Integer& b) {
        return multiply(a, b, detail::kKaratsubaThreshold);
    }
    friend Integer operator/(const Integer& a, const Integer& b);
    friend Integer operator%(const Integer& a, const Integer& b);

    Integer& operator+=(const Integer& b) { return *this = *this + b; }
    Integer& operator-=(const Integer& b) { return *this = *this - b; }
    Integer& operator*=(const Integer& b) { return *this = *this * b; }

    friend Integer operator<<(const Integer& a, std::size_t bits) {
        if (a.mag_.empty()) {
            return a;
        }
        const std::size_t limbs = bits / detail::kLimbBits;
        const unsigned rest = bits % detail::kLimbBits;
        std::vector<limb> out(a.mag_.size() + limbs + 1, 0);
        out[a.mag_.size() + limbs] = detail::shl_bits(out.data() + limbs, a.mag_.data(), a.mag_.size(), rest);
        return from_limbs(std::move(out), a.negative_);
    }

    friend Integer operator>>(const Integer& a, std::size_t bits) {
        const std::size_t limbs = bits / detail::kLimbBits;
        if (limbs >= a.mag_.size()) {
            return Integer{};
        }
        const unsigned rest = bits % detail::kLimbBits;
        std::vector<limb> out(a.mag_.size() - limbs);
        detail::shr_bits(out.data(), a.mag_.data() + limbs, out.size(), rest);
        return from_limbs(std::move(out), a.negative_);
    }

    Integer& operator<<=(std::size_t bits) { return *this = *this << bits; }
    Integer& operator>>=(std::size_t bits) { return *this = *this >> bits; }

    /// Product with an explicit Karatsuba cutover (in limbs). A threshold of
    /// SIZE_MAX forces the schoolbook path.
    friend Integer multiply(const Integer& a, const Integer& b, std::size_t karatsuba_threshold) {
        if (a.mag_.empty() || b.mag_.empty()) {
            return Integer{};
        }
        // Whole zero limbs at the bottom contribute nothing; skip them.
        std::size_t za = 0;
        while (a.mag_[za] == 0) {
            ++za;
        }
        std::size_t zb = 0;
        while (b.mag_[zb] == 0) {
            ++zb;
        }
        const std::size_t an = a.mag_.size() - za;
        const std::size_t bn = b.mag_.size() - zb;
        std::vector<limb> out(za + zb + an + bn, 0);
        if (an == 1 || bn == 1) {
            detail::mul_basecase(out.data() + za + zb, an >= bn ? a.mag_.data() + za : b.mag_.data() + zb,
                                 std::max(an, bn), an >= bn ? b.mag_.data() + zb : a.mag_.data() + za,
                                 std::min(an, bn));
        } else {
            detail::mul(out.data() + za + zb, a.mag_.data() + za, an, b.mag_.data() + zb, bn,
                        std::max<std::size_t>(karatsuba_threshold, 2));
        }
        return from_limbs(std::move(out), a.negative_ != b.negative_);
    }

private:
    void trim() {
        while (!mag_.empty() && mag_.back() == 0) {
            mag_.pop_back();
        }
        if (mag_.empty()) {
            negative_ = false;
        }
    }

    static Integer add_signed(const Integer& a, const Integer& b, bool negate_b) {
        const bool bneg = negate_b ? !b.negative_ && !b.mag_.empty() : b.negative_;
        if (b.mag_.empty()) {
            return a;
        }
        if (a.mag_.empty()) {
            Integer r = b;
            r.negative_ = bneg;
            return r;
        }
        if (a.negative_ == bneg) {
            const Integer& big = a.mag_.size() >= b.mag_.size() ? a : b;
            const Integer& small = a.mag_.size() >= b.mag_.size() ? b : a;
            std::vector<limb> out(big.mag_.size() + 1);
            out.back() = detail::add(out.data(), big.mag_.data(), big.mag_.size(), small.mag_.data(),
                                     small.mag_.size());
            return from_limbs(std::move(out), a.negative_);
        }
        const int c = compare_abs(a, b);
        if (c == 0) {
            return Integer{};
        }
        const Integer& big = c > 0 ? a : b;
        const Integer& small = c > 0 ? b : a;
        std::vector<limb> out(big.mag_.size());
        detail::sub(out.data(), big.mag_.data(), big.mag_.size(), small.mag_.data(), small.mag_.size());
        return from_limbs(std::move(out), c > 0 ? a.negative_ : bneg);
    }

    bool negative_ = false;
    std::vector<limb> mag_;
};

/// Schoolbook product, the reference path for the Karatsuba multiplier.
inline Integer mul_schoolbook(const Integer& a, const Integer& b) {
    return multiply(a, b, std::numeric_limits<std::size_t>::max());
}

struct DivResult {
    Integer quotient;
    Integer remainder;
};

namespace detail {

/// Below this many limbs in both quotient and divisor, division uses
/// algorithm D directly.
inline constexpr std::size_t kNewtonDivisionThreshold = 96;

inline DivResult divrem_schoolbook(const Integer& a, const Integer& b) {
    // Magnitudes only; a >= b > 0.
    auto al = a.limbs();
    auto bl = b.limbs();
    if (bl.size() == 1) {
        std::vector<limb> q(al.size());
        limb r = divrem_1(q.data(), al.data(), al.size(), bl[0]);
        return {Integer::from_limbs(std::move(q)), Integer(r)};
    }
    std::vector<limb> q(al.size() - bl.size() + 1), r(bl.size());
    divrem_knuth(q.data(), r.data(), al.data(), al.size(), bl.data(), bl.size());
    return {Integer::from_limbs(std::move(q)), Integer::from_limbs(std::move(r))};
}

inline std::size_t limbs_for_bits(std::size_t bits) { return (bits + kLimbBits - 1) / kLimbBits; }

/// floor(2^(2L) / d) for 2^(L-1) <= d < 2^L, by Newton iteration on the
/// leading half of d.
inline Integer reciprocal(const Integer& d, std::size_t L) {
    if (L <= kNewtonDivisionThreshold * kLimbBits) {
        return divrem_schoolbook(Integer::power_of_two(2 * L), d).quotient;
    }
    const std::size_t h = L / 2 + 32;
    const Integer dh = d >> (L - h);
    Integer x = reciprocal(dh, h) << (L - h);
    const Integer one = Integer::power_of_two(2 * L);
    const Integer e = one - d * x;
    x = x + ((x * e) >> (2 * L));
    Integer r = one - d * x;
    while (r.sign() < 0) {
        x -= 1;
        r += d;
    }
    while (r >= d) {
        x += 1;
        r -= d;
    }
    return x;
}

/// Floor division of magnitudes a >= b > 0 via a Newton reciprocal of the
/// leading bits of b, then an exact correction against the full operands.
inline DivResult divrem_newton(const Integer& a, const Integer& b) {
    const std::size_t qbits = a.bit_length() - b.bit_length() + 1;
    const std::size_t prec = qbits + 64;
    const std::size_t bbits = b.bit_length();
    Integer a2;
    Integer b2;
    if (prec >= bbits) {
        a2 = a << (prec - bbits);
        b2 = b << (prec - bbits);
    } else {
        a2 = a >> (bbits - prec);
        b2 = b >> (bbits - prec);
    }
    const Integer x = reciprocal(b2, prec);
    Integer q = (a2 * x) >> (2 * prec);
    Integer r = a - q * b;
    while (r.sign() < 0) {
        q -= 1;
        r += b;
    }
    while (r >= b) {
        q += 1;
        r -= b;
    }
    return {std::move(q), std::move(r)};
}

}  // namespace detail

/// Truncating division: the quotient rounds toward zero and the remainder
/// takes the sign of the dividend.
inline DivResult div_trunc(const Integer& a, const Integer& b) {
    if (b.is_zero()) {
        throw std::domain_error("Integer division by zero");
    }
    if (Integer::compare_abs(a, b) < 0) {
        return {Integer{}, a};
    }
    const Integer am = a.abs();
    const Integer bm = b.abs();
    const std::size_t qlimbs = am.limb_count() - bm.limb_count() + 1;
    DivResult r = (bm.limb_count() < detail::kNewtonDivisionThreshold || qlimbs < detail::kNewtonDivisionThreshold)
                      ? detail::divrem_schoolbook(am, bm)
                      : detail::divrem_newton(am, bm);
    if (a.is_negative() != b.is_negative()) {
        r.quotient = -r.quotient;
    }
    if (a.is_negative()) {
        r.remainder = -r.remainder;
    }
    return r;
}

inline Integer operator/(const Integer& a, const Integer& b) { return div_trunc(a, b).quotient; }
inline Integer operator%(const Integer& a, const Integer& b) { return div_trunc(a, b).remainder; }

inline Integer pow(const Integer& base, std::uint64_t exponent) {
    Integer result(1);
    Integer b = base;
    while (exponent != 0) {
        if ((exponent & 1U) != 0) {
            result *= b;
        }
        exponent >>= 1;
        if (exponent != 0) {
            b = b * b;
        }
    }
    return result;
}

inline Integer Integer::parse(std::string_view text, unsigned base) {
    if (base != 10 && base != 16) {
        throw std::invalid_argument("Integer::parse: unsupported base");
    }
    bool neg = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        neg = text.front() == '-';
        text.remove_prefix(1);
    }
    if (text.empty()) {
        throw std::invalid_argument("Integer::parse: no digits");
    }
    std::vector<limb> mag;
    if (base == 16) {
        std::size_t nibble = 0;
        for (std::size_t i = text.size(); i-- > 0; ++nibble) {
            const char c = text[i];
            unsigned v = 0;
            if (c >= '0' && c <= '9') {
                v = static_cast<unsigned>(c - '0');
            } else if (c >= 'a' && c <= 'f') {
                v = static_cast<unsigned>(c - 'a' + 10);
            } else if (c >= 'A' && c <= 'F') {
                v = static_cast<unsigned>(c - 'A' + 10);
            } else {
                throw std::invalid_argument("Integer::parse: bad hex digit");
            }
            if (nibble % 16 == 0) {
                mag.push_back(0);
            }
            mag.back() |= static_cast<limb>(v) << (4 * (nibble % 16));
        }
    } else {
        constexpr limb kChunk = 10000000000000000000ULL;  // 10^19
        std::size_t pos = 0;
        const std::size_t head = text.size() % 19 == 0 ? 19 : text.size() % 19;
        std::size_t take = head;
        while (pos < text.size()) {
            limb chunk = 0;
            limb scale = 1;
            for (std::size_t i = 0; i < take; ++i) {
                const char c = text[pos + i];
                if (c < '0' || c > '9') {
                    throw std::invalid_argument("Integer::parse: bad decimal digit");
                }
                chunk = chunk * 10 + static_cast<limb>(c - '0');
                scale *= 10;
            }
            pos += take;
            limb carry = chunk;
            const limb mulby = mag.empty() ? 1 : (take == 19 ? kChunk : scale);
            for (auto& l : mag) {
                detail::dlimb t = static_cast<detail::dlimb>(l) * mulby + carry;
                l = static_cast<limb>(t);
                carry = static_cast<limb>(t >> detail::kLimbBits);
            }
            if (carry != 0) {
                mag.push_back(carry);
            }
            take = 19;
        }
    }
    return from_limbs(std::move(mag), neg);
}

inline std::string Integer::to_string(unsigned base) const {
    if (mag_.empty()) {
        return "0";
    }
    std::string out;
    if (base == 16) {
        static constexpr char kDigits[] = "0123456789abcdef";
        for (limb l : mag_) {
            for (int i = 0; i < 16; ++i) {
                out.push_back(kDigits[l & 0xF]);
                l >>= 4;
            }
        }
    } else if (base == 10) {
        constexpr limb kChunk = 10000000000000000000ULL;
        std::vector<limb> work = mag_;
        std::size_t n = work.size();
        while (n > 0) {
            limb r = detail::divrem_1(work.data(), work.data(), n, kChunk);
            n = detail::normalized_size(work.data(), n);
            for (int i = 0; i < 19; ++i) {
                out.push_back(static_cast<char>('0' + r % 10));
                r /= 10;
            }
        }
    } else {
        throw std::invalid_argument("Integer::to_string: unsupported base");
    }
    while (out.size() > 1 && out.back() == '0') {
        out.pop_back();
    }
    if (negative_) {
        out.push_back('-');
    }
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace linexp
