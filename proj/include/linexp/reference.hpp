#pragma once

// Brute-force Taylor summation of exp(x) and exp(i x), used as an
// independent oracle. Depends on the bignum layer only.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <stdexcept>

#include "linexp/bignum/dyadic.hpp"

namespace linexp::reference {

inline std::size_t guard_bits(std::size_t bits) { return 4 * bits + 32; }

inline void check_argument(const Dyadic& x) {
    if (!(x.abs() <= Dyadic(4))) {
        throw std::domain_error("reference oracle: |x| must not exceed 4");
    }
}

/// exp(x) within 2^-bits. Every term is held at 4*bits + 32 fractional bits
/// and summation stops at the first term that truncates to zero. The result
/// carries the full guard precision.
inline Dyadic exp(const Dyadic& x, std::size_t bits) {
    check_argument(x);
    const std::size_t g = guard_bits(bits);
    Integer term = Integer(1) << g;
    Integer sum = term;
    for (std::uint64_t j = 1; !term.is_zero(); ++j) {
        term = div_trunc((term * x.mantissa()) >> x.scale(), Integer(j)).quotient;
        sum = sum + term;
    }
    return Dyadic(sum, g);
}

/// cos(x) + i sin(x) within 2^-bits per component, same scheme as exp.
inline ComplexDyadic expi(const Dyadic& x, std::size_t bits) {
    check_argument(x);
    const std::size_t g = guard_bits(bits);
    Integer re = Integer(1) << g;
    Integer im;
    Integer sum_re = re;
    Integer sum_im;
    for (std::uint64_t j = 1; !(re.is_zero() && im.is_zero()); ++j) {
        // (re + i im) * i x / j
        Integer next_re = div_trunc((-(im * x.mantissa())) >> x.scale(), Integer(j)).quotient;
        Integer next_im = div_trunc((re * x.mantissa()) >> x.scale(), Integer(j)).quotient;
        re = std::move(next_re);
        im = std::move(next_im);
        sum_re = sum_re + re;
        sum_im = sum_im + im;
    }
    return {Dyadic(sum_re, g), Dyadic(sum_im, g)};
}

/// exp(x + i y) as the exact product of the two real-argument sums.
inline ComplexDyadic exp_complex(const Dyadic& x, const Dyadic& y, std::size_t bits) {
    // |exp(x)| <= e^4 < 2^6, so six extra bits keep the product within 2^-bits.
    const Dyadic ex = exp(x, bits + 8);
    const ComplexDyadic ey = expi(y, bits + 8);
    return {ex * ey.re, ex * ey.im};
}

}  // namespace linexp::reference
