#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "linexp/bignum/integer.hpp"

namespace linexp {

/// Fixed-point dyadic rational mantissa * 2^-scale.
///
/// Values are exact; no canonical form is enforced, so 0.10 and 0.1 (binary)
/// are distinct representations of the same value. Equality and ordering
/// compare values.
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(Integer mantissa, std::size_t scale) : mantissa_(std::move(mantissa)), scale_(scale) {}

    template <std::integral Int>
    Dyadic(Int value) : mantissa_(value) {}  // NOLINT(google-explicit-constructor)

    [[nodiscard]] const Integer& mantissa() const noexcept { return mantissa_; }
    [[nodiscard]] std::size_t scale() const noexcept { return scale_; }
    [[nodiscard]] int sign() const noexcept { return mantissa_.sign(); }
    [[nodiscard]] bool is_zero() const noexcept { return mantissa_.is_zero(); }

    /// Same value represented with `scale` fractional bits; requires
    /// scale >= this->scale().
    [[nodiscard]] Dyadic rescaled(std::size_t scale) const {
        if (scale < scale_) {
            throw std::invalid_argument("Dyadic::rescaled would drop bits; use truncate_at");
        }
        return Dyadic(mantissa_ << (scale - scale_), scale);
    }

    /// Multiplies by 2^exponent exactly.
    [[nodiscard]] Dyadic ldexp(std::ptrdiff_t exponent) const {
        if (exponent <= 0) {
            return Dyadic(mantissa_, scale_ + static_cast<std::size_t>(-exponent));
        }
        const auto e = static_cast<std::size_t>(exponent);
        if (e <= scale_) {
            return Dyadic(mantissa_, scale_ - e);
        }
        return Dyadic(mantissa_ << (e - scale_), 0);
    }

    /// Drops trailing zero bits of the mantissa without changing the value.
    [[nodiscard]] Dyadic reduced() const {
        if (mantissa_.is_zero()) {
            return Dyadic{};
        }
        const std::size_t tz = std::min(mantissa_.trailing_zeros(), scale_);
        return Dyadic(mantissa_ >> tz, scale_ - tz);
    }

    [[nodiscard]] Dyadic abs() const { return Dyadic(mantissa_.abs(), scale_); }

    Dyadic operator-() const { return Dyadic(-mantissa_, scale_); }

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
        if (a.scale_ == b.scale_) {
            return Dyadic(a.mantissa_ + b.mantissa_, a.scale_);
        }
        if (a.scale_ > b.scale_) {
            return Dyadic(a.mantissa_ + (b.mantissa_ << (a.scale_ - b.scale_)), a.scale_);
        }
        return Dyadic((a.mantissa_ << (b.scale_ - a.scale_)) + b.mantissa_, b.scale_);
    }

    friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

    friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
        return Dyadic(a.mantissa_ * b.mantissa_, a.scale_ + b.scale_);
    }

    Dyadic& operator+=(const Dyadic& b) { return *this = *this + b; }
    Dyadic& operator-=(const Dyadic& b) { return *this = *this - b; }
    Dyadic& operator*=(const Dyadic& b) { return *this = *this * b; }

    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
        if (a.scale_ == b.scale_) {
            return a.mantissa_ <=> b.mantissa_;
        }
        if (a.scale_ > b.scale_) {
            return a.mantissa_ <=> (b.mantissa_ << (a.scale_ - b.scale_));
        }
        return (a.mantissa_ << (b.scale_ - a.scale_)) <=> b.mantissa_;
    }

    friend bool operator==(const Dyadic& a, const Dyadic& b) { return (a <=> b) == 0; }

    /// Approximate conversion, for diagnostics only.
    [[nodiscard]] double to_double() const {
        const std::size_t bits = mantissa_.bit_length();
        if (bits > 1000) {
            const std::size_t drop = bits - 960;
            return std::ldexp((mantissa_ >> drop).to_double(),
                              static_cast<int>(drop) - static_cast<int>(scale_));
        }
        return std::ldexp(mantissa_.to_double(), -static_cast<int>(scale_));
    }

private:
    Integer mantissa_;
    std::size_t scale_ = 0;
};

/// Discards fractional bits beyond position `bits`, rounding toward zero.
/// Afterwards |result - x| < 2^-bits and |result| <= |x|.
inline Dyadic truncate_at(const Dyadic& x, std::size_t bits) {
    if (x.scale() <= bits) {
        return x;
    }
    return Dyadic(x.mantissa() >> (x.scale() - bits), bits);
}

/// |x| < 2^exponent, evaluated exactly (exponent may be negative).
inline bool abs_less_than_pow2(const Dyadic& x, std::ptrdiff_t exponent) {
    if (x.is_zero()) {
        return true;
    }
    // |m| < 2^(exponent + scale)  <=>  bit_length(m) <= exponent + scale
    const auto limit = exponent + static_cast<std::ptrdiff_t>(x.scale());
    return static_cast<std::ptrdiff_t>(x.mantissa().bit_length()) <= limit;
}

/// num/den truncated toward zero to `bits` fractional bits, so the result
/// lies within 2^-bits of the exact quotient.
inline Dyadic div_to_precision(const Integer& num, const Integer& den, std::size_t bits) {
    if (den.is_zero()) {
        throw std::domain_error("div_to_precision: zero denominator");
    }
    if (num.is_zero()) {
        return Dyadic{};
    }
    return Dyadic(div_trunc(num << bits, den).quotient, bits);
}

/// Complex number with dyadic components.
struct ComplexDyadic {
    Dyadic re;
    Dyadic im;

    ComplexDyadic() = default;
    ComplexDyadic(Dyadic r, Dyadic i = Dyadic{}) : re(std::move(r)), im(std::move(i)) {}  // NOLINT

    ComplexDyadic operator-() const { return {-re, -im}; }

    [[nodiscard]] ComplexDyadic conj() const { return {re, -im}; }

    /// Multiplication by i^power.
    [[nodiscard]] ComplexDyadic rotated(unsigned power) const {
        switch (power % 4) {
            case 1:
                return {-im, re};
            case 2:
                return {-re, -im};
            case 3:
                return {im, -re};
            default:
                return *this;
        }
    }

    [[nodiscard]] ComplexDyadic ldexp(std::ptrdiff_t exponent) const {
        return {re.ldexp(exponent), im.ldexp(exponent)};
    }

    friend ComplexDyadic operator+(const ComplexDyadic& a, const ComplexDyadic& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend ComplexDyadic operator-(const ComplexDyadic& a, const ComplexDyadic& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend ComplexDyadic operator*(const ComplexDyadic& a, const ComplexDyadic& b) {
        if (a.im.is_zero()) {
            return {a.re * b.re, a.re * b.im};
        }
        if (b.im.is_zero()) {
            return {a.re * b.re, a.im * b.re};
        }
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const ComplexDyadic& a, const ComplexDyadic& b) {
        return a.re == b.re && a.im == b.im;
    }
};

inline ComplexDyadic truncate_at(const ComplexDyadic& z, std::size_t bits) {
    return {truncate_at(z.re, bits), truncate_at(z.im, bits)};
}

/// Scalar-type hooks used by the generic evaluation code, which runs on
/// either Dyadic (real mode) or ComplexDyadic (imaginary mode).
template <typename T>
struct value_traits;

template <>
struct value_traits<Dyadic> {
    static constexpr bool is_complex = false;
    static Dyadic one() { return Dyadic(1); }
};

template <>
struct value_traits<ComplexDyadic> {
    static constexpr bool is_complex = true;
    static ComplexDyadic one() { return ComplexDyadic(Dyadic(1)); }
};

/// Raises v to the power s = 2^j by j squarings, truncating every
/// intermediate square to `bits` fractional bits.
template <typename Value>
Value pow_by_squaring(const Value& v, std::uint64_t s, std::size_t bits) {
    if (s == 0 || !std::has_single_bit(s)) {
        throw std::invalid_argument("pow_by_squaring: exponent must be a power of two");
    }
    Value r = truncate_at(v, bits);
    for (std::uint64_t e = s; e > 1; e >>= 1) {
        if constexpr (value_traits<Value>::is_complex) {
            // (a + bi)^2 = (a^2 - b^2) + 2ab i, formed exactly before truncation.
            Dyadic re = r.re * r.re - r.im * r.im;
            Dyadic im = (r.re * r.im).ldexp(1);
            r = truncate_at(ComplexDyadic(std::move(re), std::move(im)), bits);
        } else {
            r = truncate_at(r * r, bits);
        }
    }
    return r;
}

}  // namespace linexp
