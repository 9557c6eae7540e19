#pragma once

// Block decomposition of a reduced argument and the sequential truncating
// product exp(x_m) = exp(gamma_2) exp(gamma_3) ... exp(gamma_{k+1}).

#include <bit>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "linexp/binsplit.hpp"
#include "linexp/bignum/dyadic.hpp"
#include "linexp/instrument.hpp"
#include "linexp/linsplit.hpp"

namespace linexp {

/// The reduced argument does not satisfy |x| < 1/4 (or the reduction was fed
/// an argument outside the declared area).
class reduction_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct Block {
    unsigned nu = 2;
    Integer beta;  // signed, |beta| < 2^(2^(nu-1))
};

/// x_m = sum over nu = 2..k+1 of beta_nu * 2^(-2^nu). Block nu holds the
/// fractional bits 2^(nu-1)+1 .. 2^nu of |x_m|; every beta carries the sign
/// of x_m.
struct BlockDecomposition {
    int sign = 1;
    std::vector<Block> blocks;
    std::size_t m = 0;
    unsigned k = 0;

    /// Sum of the blocks, exact.
    [[nodiscard]] Dyadic reconstruct() const {
        Dyadic sum;
        for (const auto& b : blocks) {
            sum = sum + Dyadic(b.beta, std::size_t{1} << b.nu);
        }
        return sum;
    }
};

/// Slices x_m into doubling-width blocks. Requires |x_m| < 1/4, at most m
/// fractional bits and m = 2^(k+1).
inline BlockDecomposition decompose_blocks(const Dyadic& xm, std::size_t m, unsigned k) {
    if (k >= 62 || m != (std::size_t{1} << (k + 1))) {
        throw std::invalid_argument("decompose_blocks: m must equal 2^(k+1)");
    }
    if (xm.scale() > m) {
        throw std::invalid_argument("decompose_blocks: argument has more than m fractional bits");
    }
    if (!abs_less_than_pow2(xm, -2)) {
        throw reduction_error("decompose_blocks: |x_m| >= 1/4");
    }
    BlockDecomposition dec;
    dec.sign = xm.sign() < 0 ? -1 : 1;
    dec.m = m;
    dec.k = k;
    const Integer mag = xm.mantissa().abs() << (m - xm.scale());
    for (unsigned nu = 2; nu <= k + 1; ++nu) {
        const std::size_t end = std::size_t{1} << nu;  // last bit position of the block
        const std::size_t width = end / 2;
        Integer beta = (mag >> (m - end)).low_bits(width);
        if (dec.sign < 0) {
            beta = -beta;
        }
        dec.blocks.push_back({nu, std::move(beta)});
    }
    return dec;
}

/// exp(gamma) per block through the linear-space scheme.
struct LinearSpaceBlocks {
    template <typename Value>
    Value eval(const Integer& beta, unsigned nu, std::size_t m) const {
        const Mode mode = value_traits<Value>::is_complex ? Mode::imaginary : Mode::real;
        return eval_exp_gamma<Value>(BlockParams::make(beta, nu, m, mode));
    }
};

/// exp(gamma) per block as one classical binary splitting over the block's
/// r = m 2^(1-nu) term Taylor partial sum. Its intermediates grow like
/// r log r bits; kept as the comparison baseline.
struct ClassicBlocks {
    template <typename Value>
    Value eval(const Integer& beta, unsigned nu, std::size_t m) const {
        if (beta.is_zero()) {
            return value_traits<Value>::one();
        }
        const Mode mode = value_traits<Value>::is_complex ? Mode::imaginary : Mode::real;
        const std::size_t r = m >> (nu - 1);
        const ExpSegmentSeries series(beta, std::size_t{1} << nu, 0, r + 1, mode);
        return bin_split_sum<Value>(series, m + 2);
    }
};

/// exp(x_m) to within 2^-n3 as h_2 = exp(gamma_2)*, h_i = trunc(h_{i-1}
/// exp(gamma_i)*, m), each block value formed on demand and dropped after
/// its multiplication. `trace(i, h_i)` observes every intermediate.
template <typename Value, typename Blocks = LinearSpaceBlocks, typename Trace = NoTrace>
Value fee_product(const BlockDecomposition& dec, std::size_t n3, const Blocks& blocks = {}, Trace&& trace = {}) {
    if (dec.m < 16) {
        throw std::invalid_argument("fee_product: m must be at least 16");
    }
    if (dec.k >= 62 || n3 + 1 > (std::size_t{1} << dec.k)) {
        throw std::invalid_argument("fee_product: n3 + 1 must not exceed 2^k");
    }
    const std::size_t bits = value_traits<Value>::is_complex ? dec.m + 1 : dec.m;
    auto check = [](const Value& h, std::size_t i) {
        ++instrument::counters().product_bound_checks;
        const auto limit = static_cast<std::ptrdiff_t>(i) - 1;
        bool ok = false;
        if constexpr (value_traits<Value>::is_complex) {
            ok = abs_less_than_pow2(h.re, limit) && abs_less_than_pow2(h.im, limit);
        } else {
            ok = abs_less_than_pow2(h, limit);
        }
        if (!ok) {
            throw bound_violation("|h_" + std::to_string(i) + "| >= 2^(i-1) in the block product");
        }
    };

    Value h = value_traits<Value>::one();
    bool first = true;
    for (const auto& block : dec.blocks) {
        Value factor = blocks.template eval<Value>(block.beta, block.nu, dec.m);
        if (first) {
            h = std::move(factor);
            first = false;
        } else {
            h = truncate_at(h * factor, bits);
        }
        check(h, block.nu);
        trace(static_cast<std::size_t>(block.nu), h);
    }
    return h;
}

}  // namespace linexp
