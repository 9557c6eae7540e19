#pragma once

// Linear-space evaluation of one exp block exp(gamma), gamma = beta * 2^(-2^nu).
//
// The Taylor partial sum of exp(gamma) is split into k1 segments of r1 terms
//
//   P = sigma_1 + tau_2 [sigma_2 + tau_3 [ ... + tau_k1 sigma_k1 ]]
//
// where sigma_t sums r1 terms of the t-th segment (relative to its first
// term) and tau_t is the ratio between the first terms of consecutive
// segments. Evaluating the bracket from the inside out while truncating every
// intermediate to m1 bits keeps only O(1) numbers of O(m) bits alive.

#include <bit>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include "linexp/binsplit.hpp"
#include "linexp/bignum/dyadic.hpp"
#include "linexp/instrument.hpp"

namespace linexp {

/// Parameters of one block for target accuracy 2^-m.
struct BlockParams {
    Integer beta;
    unsigned nu = 2;
    std::size_t m = 0;
    Mode mode = Mode::real;

    std::size_t r = 0;   // term budget m * 2^(2 - nu)
    std::size_t k1 = 0;  // log2(r), number of segments
    std::size_t r1 = 0;  // ceil(r / k1), terms per segment
    std::size_t m1 = 0;  // working accuracy 2m + 1

    /// Validates and derives r, k1, r1, m1. Requires m a power of two,
    /// 2 <= nu <= log2(m) + 1 and |beta| < 2^(2^(nu - 1)).
    static BlockParams make(Integer beta, unsigned nu, std::size_t m, Mode mode) {
        if (m < 2 || !std::has_single_bit(m)) {
            throw std::invalid_argument("BlockParams: m must be a power of two");
        }
        const auto log2m = static_cast<unsigned>(std::countr_zero(m));
        if (nu < 2 || nu > log2m + 1) {
            throw std::invalid_argument("BlockParams: nu out of range for m");
        }
        if (nu - 1 >= 63 || beta.bit_length() > (std::size_t{1} << (nu - 1))) {
            throw std::invalid_argument("BlockParams: beta wider than 2^(nu-1) bits");
        }
        BlockParams bp;
        bp.beta = std::move(beta);
        bp.nu = nu;
        bp.m = m;
        bp.mode = mode;
        bp.r = m >> (nu - 2);
        bp.k1 = static_cast<std::size_t>(std::countr_zero(bp.r));
        bp.r1 = (bp.r + bp.k1 - 1) / bp.k1;
        bp.m1 = 2 * m + 1;
        return bp;
    }

    /// 2^nu, the binary exponent of the block's scale.
    [[nodiscard]] std::size_t block_shift() const { return std::size_t{1} << nu; }

    /// Fractional bits kept by truncation in the Horner scheme; imaginary
    /// mode keeps one more bit per component.
    [[nodiscard]] std::size_t working_bits() const { return mode == Mode::imaginary ? m1 + 1 : m1; }
};

/// Terms first..first+count-1 of exp(gamma) relative to the term at index
/// first-1: sum_j beta^j / ((first)(first+1)...(first+j-1) * 2^(j 2^nu)).
/// With first = 1 this is the plain Taylor partial sum of exp(gamma).
class ExpSegmentSeries {
public:
    ExpSegmentSeries(const Integer& beta, std::size_t shift, std::size_t offset, std::size_t count, Mode mode)
        : beta_(&beta), shift_(shift), offset_(offset), count_(count), mode_(mode) {
        if (count == 0) {
            throw invalid_series("ExpSegmentSeries: empty segment");
        }
    }

    [[nodiscard]] Integer a(std::size_t) const { return Integer(1); }
    [[nodiscard]] Integer b(std::size_t) const { return Integer(1); }
    [[nodiscard]] Coefficient p(std::size_t j) const {
        if (j == 0) {
            return Coefficient(Integer(1));
        }
        return Coefficient(*beta_, mode_ == Mode::imaginary ? 1U : 0U);
    }
    [[nodiscard]] Integer q(std::size_t j) const {
        if (j == 0) {
            return Integer(1);
        }
        return Integer(offset_ + j) << shift_;
    }
    [[nodiscard]] std::size_t terms() const { return count_ - 1; }
    [[nodiscard]] Mode mode() const { return mode_; }

private:
    const Integer* beta_;
    std::size_t shift_;
    std::size_t offset_;
    std::size_t count_;
    Mode mode_;
};

namespace detail {

/// Product lo * (lo+1) * ... * hi as a balanced tree.
inline Integer range_product(std::size_t lo, std::size_t hi) {
    if (lo > hi) {
        return Integer(1);
    }
    if (hi - lo < 8) {
        Integer r(lo);
        for (std::size_t j = lo + 1; j <= hi; ++j) {
            r = r * Integer(j);
        }
        return r;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return range_product(lo, mid) * range_product(mid + 1, hi);
}

/// num / (den * 2^exp2) truncated toward zero at `bits` fractional bits.
inline Dyadic div_pow2_to_precision(const Integer& num, const Integer& den, std::size_t exp2, std::size_t bits) {
    if (num.is_zero()) {
        return Dyadic{};
    }
    // |num/den| < 2^(len(num) - len(den) + 1); nothing survives once that is
    // below 2^-bits.
    if (exp2 >= bits + num.bit_length() + 1) {
        return Dyadic{};
    }
    if (bits >= exp2) {
        return Dyadic(div_trunc(num << (bits - exp2), den).quotient, bits);
    }
    return Dyadic(div_trunc(num, den << (exp2 - bits)).quotient, bits);
}

template <typename Value>
void check_mode(const BlockParams& bp) {
    if (value_traits<Value>::is_complex != (bp.mode == Mode::imaginary)) {
        throw std::invalid_argument("block mode does not match the requested value type");
    }
}

/// |h| < 2 (componentwise for complex values).
template <typename Value>
bool below_two(const Value& h) {
    if constexpr (value_traits<Value>::is_complex) {
        return abs_less_than_pow2(h.re, 1) && abs_less_than_pow2(h.im, 1);
    } else {
        return abs_less_than_pow2(h, 1);
    }
}

}  // namespace detail

/// sigma_t, t in 1..k1, by classical binary splitting to accuracy 2^-m1.
template <typename Value>
Value sigma_star(const BlockParams& bp, std::size_t t) {
    detail::check_mode<Value>(bp);
    if (t < 1 || t > bp.k1) {
        throw std::out_of_range("sigma_star: segment index out of range");
    }
    const ExpSegmentSeries series(bp.beta, bp.block_shift(), (t - 1) * bp.r1, bp.r1, bp.mode);
    return bin_split_sum<Value>(series, bp.m1);
}

/// tau_t = beta^r1 / (((t-2) r1 + 1) ... ((t-1) r1) * 2^(r1 2^nu)), t in 2..k1,
/// to accuracy 2^-m1. Numerator and denominator come from balanced products.
template <typename Value>
Value tau_star(const BlockParams& bp, std::size_t t) {
    detail::check_mode<Value>(bp);
    if (t < 2 || t > bp.k1) {
        throw std::out_of_range("tau_star: segment index out of range");
    }
    const std::size_t bits = bp.working_bits();
    const Integer num = pow(bp.beta, bp.r1);
    const Integer den = detail::range_product((t - 2) * bp.r1 + 1, (t - 1) * bp.r1);
    const Dyadic mag = detail::div_pow2_to_precision(num, den, bp.r1 * bp.block_shift(), bits);
    if constexpr (value_traits<Value>::is_complex) {
        return ComplexDyadic(mag).rotated(static_cast<unsigned>(bp.r1 % 4));
    } else {
        return mag;
    }
}

struct NoTrace {
    template <typename Value>
    void operator()(std::size_t, const Value&) const {}
};

/// Approximates the Taylor partial sum of exp(gamma) to within 2^-(m+1) via
///
///   h_1 = sigma*_k1,  h_i = trunc(sigma*_{k1-i+1} + tau*_{k1-i+2} h_{i-1}, m1).
///
/// Each sigma* and tau* is formed inside its iteration and dropped at the end
/// of it. `trace(i, h_i)` observes every intermediate.
template <typename Value, typename Trace = NoTrace>
Value eval_p_gamma(const BlockParams& bp, Trace&& trace = {}) {
    detail::check_mode<Value>(bp);
    const std::size_t bits = bp.working_bits();
    auto check = [](const Value& h, std::size_t i) {
        ++instrument::counters().horner_bound_checks;
        if (!detail::below_two(h)) {
            throw bound_violation("|h_" + std::to_string(i) + "| >= 2 in block evaluation");
        }
    };

    Value h = truncate_at(sigma_star<Value>(bp, bp.k1), bits);
    check(h, 1);
    trace(std::size_t{1}, h);
    for (std::size_t i = 2; i <= bp.k1; ++i) {
        Value next = sigma_star<Value>(bp, bp.k1 - i + 1);
        next = next + tau_star<Value>(bp, bp.k1 - i + 2) * h;
        h = truncate_at(next, bits);
        check(h, i);
        trace(i, h);
    }
    return h;
}

/// exp(gamma) to within 2^-m (modulus in imaginary mode). The result keeps
/// m + 2 fractional bits.
template <typename Value>
Value eval_exp_gamma(const BlockParams& bp) {
    detail::check_mode<Value>(bp);
    if (bp.beta.is_zero()) {
        return value_traits<Value>::one();
    }
    return truncate_at(eval_p_gamma<Value>(bp), bp.m + 2);
}

}  // namespace linexp
