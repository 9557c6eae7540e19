#pragma once

// Classical binary splitting for partial sums
//
//   S(i1, i2) = sum_{i=i1}^{i2} a(i)/b(i) * prod_{j=i1}^{i} p(j)/q(j)
//
// with integer a, b, q and p either an integer or i times an integer. The
// recursion returns P, Q, B and T = B*Q*S exactly; only the final step divides.

#include <bit>
#include <concepts>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "linexp/bignum/dyadic.hpp"
#include "linexp/instrument.hpp"

namespace linexp {

enum class Mode { real, imaginary };

/// value * i^unit_power. Real-mode coefficients always have unit_power 0.
struct Coefficient {
    Integer value;
    unsigned unit_power = 0;

    Coefficient() = default;
    Coefficient(Integer v, unsigned power = 0) : value(std::move(v)), unit_power(power % 4) {}  // NOLINT

    friend Coefficient operator*(const Coefficient& a, const Coefficient& b) {
        return {a.value * b.value, (a.unit_power + b.unit_power) % 4};
    }
    friend bool operator==(const Coefficient& a, const Coefficient& b) {
        if (a.value.is_zero() || b.value.is_zero()) {
            return a.value.is_zero() && b.value.is_zero();
        }
        return a.value == b.value && a.unit_power == b.unit_power;
    }
};

/// re + i*im with integer parts.
struct GaussianInteger {
    Integer re;
    Integer im;

    static GaussianInteger from(const Coefficient& c) {
        switch (c.unit_power) {
            case 1:
                return {Integer{}, c.value};
            case 2:
                return {-c.value, Integer{}};
            case 3:
                return {Integer{}, -c.value};
            default:
                return {c.value, Integer{}};
        }
    }

    [[nodiscard]] GaussianInteger times(const Integer& k) const { return {re * k, im * k}; }
    [[nodiscard]] GaussianInteger times(const Coefficient& c) const {
        GaussianInteger scaled = times(c.value);
        switch (c.unit_power) {
            case 1:
                return {-scaled.im, std::move(scaled.re)};
            case 2:
                return {-scaled.re, -scaled.im};
            case 3:
                return {std::move(scaled.im), -scaled.re};
            default:
                return scaled;
        }
    }

    friend GaussianInteger operator+(const GaussianInteger& a, const GaussianInteger& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend bool operator==(const GaussianInteger&, const GaussianInteger&) = default;
};

/// Coefficient generators of a hypergeometric partial sum over indices
/// 0..terms(). Coefficients are produced on demand, never tabulated.
template <typename S>
concept SeriesSpec = requires(const S& s, std::size_t i) {
    { s.a(i) } -> std::convertible_to<Integer>;
    { s.b(i) } -> std::convertible_to<Integer>;
    { s.p(i) } -> std::convertible_to<Coefficient>;
    { s.q(i) } -> std::convertible_to<Integer>;
    { s.terms() } -> std::convertible_to<std::size_t>;
    { s.mode() } -> std::convertible_to<Mode>;
};

/// Series given by arbitrary callables; convenient for tests and one-offs.
struct FunctionSeries {
    std::function<Integer(std::size_t)> a_fn;
    std::function<Integer(std::size_t)> b_fn;
    std::function<Coefficient(std::size_t)> p_fn;
    std::function<Integer(std::size_t)> q_fn;
    std::size_t last = 0;
    Mode series_mode = Mode::real;

    [[nodiscard]] Integer a(std::size_t i) const { return a_fn(i); }
    [[nodiscard]] Integer b(std::size_t i) const { return b_fn(i); }
    [[nodiscard]] Coefficient p(std::size_t j) const { return p_fn(j); }
    [[nodiscard]] Integer q(std::size_t j) const { return q_fn(j); }
    [[nodiscard]] std::size_t terms() const { return last; }
    [[nodiscard]] Mode mode() const { return series_mode; }
};

class invalid_series : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// P = p(i1)...p(i2), Q = q(i1)...q(i2), B = b(i1)...b(i2), T = B*Q*S(i1, i2).
struct PQBT {
    Coefficient P;
    Integer Q;
    Integer B;
    GaussianInteger T;
};

/// ceil(log2(n)) + 1 levels for a range of n indices.
inline std::size_t bin_split_depth_limit(std::size_t n) {
    return static_cast<std::size_t>(std::bit_width(n > 0 ? n - 1 : 0)) + 1;
}

namespace detail {

template <SeriesSpec S>
PQBT bin_split_node(const S& spec, std::size_t i1, std::size_t i2, std::size_t depth_limit) {
    instrument::DepthGuard guard;
    if (instrument::counters().depth > depth_limit) {
        throw std::logic_error("binary splitting exceeded its recursion depth bound");
    }
    if (i1 == i2) {
        Coefficient p = spec.p(i1);
        Integer q = spec.q(i1);
        Integer b = spec.b(i1);
        if (q.is_zero() || b.is_zero()) {
            throw invalid_series("zero b(i) or q(j) at index " + std::to_string(i1));
        }
        if (spec.mode() == Mode::real && p.unit_power != 0) {
            throw invalid_series("real-mode series produced an imaginary coefficient");
        }
        GaussianInteger t = GaussianInteger::from(p).times(spec.a(i1));
        return {std::move(p), std::move(q), std::move(b), std::move(t)};
    }
    const std::size_t mid = i1 + (i2 - i1) / 2;
    PQBT left = bin_split_node(spec, i1, mid, depth_limit);
    PQBT right = bin_split_node(spec, mid + 1, i2, depth_limit);
    // T = B_r Q_r T_l + B_l P_l T_r
    GaussianInteger t = left.T.times(right.B * right.Q) + right.T.times(left.P).times(left.B);
    return {left.P * right.P, left.Q * right.Q, left.B * right.B, std::move(t)};
}

}  // namespace detail

/// Exact P, Q, B, T on [i1, i2] with disjoint halves [i1, mid], [mid+1, i2].
template <SeriesSpec S>
PQBT bin_split_recurse(const S& spec, std::size_t i1, std::size_t i2) {
    if (i1 > i2 || i2 > spec.terms()) {
        throw std::out_of_range("bin_split_recurse: bad index range");
    }
    const std::size_t base = instrument::counters().depth;
    return detail::bin_split_node(spec, i1, i2, base + bin_split_depth_limit(i2 - i1 + 1));
}

/// S(0, terms) to within 2^-bits. Value is Dyadic for real-mode series and
/// ComplexDyadic otherwise; imaginary-mode components are truncated one bit
/// deeper so the complex modulus error stays below 2^-bits.
template <typename Value, SeriesSpec S>
Value bin_split_sum(const S& spec, std::size_t bits) {
    PQBT r = bin_split_recurse(spec, 0, spec.terms());
    const Integer den = r.B * r.Q;
    if constexpr (value_traits<Value>::is_complex) {
        const std::size_t b = spec.mode() == Mode::imaginary ? bits + 1 : bits;
        return ComplexDyadic(div_to_precision(r.T.re, den, b), div_to_precision(r.T.im, den, b));
    } else {
        if (!r.T.im.is_zero()) {
            throw invalid_series("complex partial sum requested as a real value");
        }
        return div_to_precision(r.T.re, den, bits);
    }
}

}  // namespace linexp
