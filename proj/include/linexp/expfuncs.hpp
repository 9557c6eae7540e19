#pragma once

// Constructive exp, sin, cos, sinh and cosh of complex arguments given by
// oracles. Arguments are reduced by s = 2^(p+3), evaluated by the block
// product and raised back to the power s by repeated squaring.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "linexp/bignum/dyadic.hpp"
#include "linexp/fee.hpp"

namespace linexp {

/// An oracle returned a value with the wrong number of fractional bits.
class malformed_oracle : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A constructive real: query(n) is within 2^-n of the value and carries
/// exactly n + 2 fractional bits.
class ArgumentOracle {
public:
    using Fn = std::function<Dyadic(std::size_t)>;

    explicit ArgumentOracle(Fn fn) : fn_(std::move(fn)) {}

    [[nodiscard]] Dyadic query(std::size_t n) const {
        Dyadic v = fn_(n);
        if (v.scale() != n + 2) {
            throw malformed_oracle("oracle answered a query for " + std::to_string(n) + " bits with " +
                                   std::to_string(v.scale()) + " fractional bits instead of " +
                                   std::to_string(n + 2));
        }
        return v;
    }

    static ArgumentOracle zero() { return constant(Dyadic{}); }

    /// A dyadic value, truncated to the requested precision.
    static ArgumentOracle constant(Dyadic x) {
        return ArgumentOracle([x = std::move(x)](std::size_t n) { return truncate_at(x, n + 2).rescaled(n + 2); });
    }

    /// num / den, computed by long division at each query.
    static ArgumentOracle rational(Integer num, Integer den) {
        if (den.is_zero()) {
            throw std::domain_error("ArgumentOracle::rational: zero denominator");
        }
        return ArgumentOracle([num = std::move(num), den = std::move(den)](std::size_t n) {
            return div_to_precision(num, den, n + 2).rescaled(n + 2);
        });
    }

    [[nodiscard]] ArgumentOracle negated() const {
        return ArgumentOracle([inner = *this](std::size_t n) { return -inner.query(n); });
    }

private:
    Fn fn_;
};

/// Working precisions for one evaluation at accuracy 2^-n over |z| <= 2^p.
struct PrecisionPlan {
    std::size_t n = 0;
    unsigned p = 0;
    std::size_t n1 = 0;  // accuracy needed after reduction
    std::size_t n3 = 0;  // accuracy of the block product, n1 + 1
    unsigned k = 0;      // smallest with n3 + 1 <= 2^k
    std::size_t m = 0;   // 2^(k+1), block accuracy and argument width
    unsigned p1 = 0;     // p + 3
    std::uint64_t s = 0; // 2^p1
    std::size_t w = 0;   // fractional bits kept while squaring

    [[nodiscard]] std::size_t query_bits() const { return m > p1 + 1 ? m - p1 : 1; }
};

inline constexpr unsigned kMaxAreaExponent = 24;

/// n1 = n + 2(p+3) + ceil(log2(e) 2^p) + 8 and w = n3 + 2(p+3) + 8. n is
/// clamped to at least 1.
inline PrecisionPlan plan_precision(std::size_t n, unsigned p) {
    if (p > kMaxAreaExponent) {
        throw std::invalid_argument("plan_precision: area exponent above " + std::to_string(kMaxAreaExponent));
    }
    PrecisionPlan plan;
    plan.n = std::max<std::size_t>(n, 1);
    plan.p = p;
    const auto growth = static_cast<std::size_t>(std::ceil(std::numbers::log2e * std::ldexp(1.0, static_cast<int>(p))));
    plan.n1 = plan.n + 2 * (p + 3) + growth + 8;
    plan.n3 = plan.n1 + 1;
    plan.k = static_cast<unsigned>(std::bit_width(plan.n3));  // 2^k >= n3 + 1
    if (plan.k + 1 >= 63) {
        throw std::invalid_argument("plan_precision: accuracy too large");
    }
    plan.m = std::size_t{1} << (plan.k + 1);
    plan.p1 = p + 3;
    plan.s = std::uint64_t{1} << plan.p1;
    plan.w = plan.n3 + 2 * (p + 3) + 8;
    return plan;
}

enum class Method { linspace, classic };

inline const char* to_string(Method method) { return method == Method::classic ? "classic" : "linspace"; }

namespace detail {

/// x* / s truncated to m bits, with the area contract checked on the way.
inline Dyadic reduce_argument(const ArgumentOracle& oracle, const PrecisionPlan& plan) {
    const std::size_t q = plan.query_bits();
    const Dyadic x = oracle.query(q);
    const Dyadic slack(Integer(1), q);
    if (x.abs() > Dyadic(Integer::power_of_two(plan.p), 0) + slack) {
        throw reduction_error("argument outside the area |x| <= 2^" + std::to_string(plan.p));
    }
    const Dyadic reduced = x.ldexp(-static_cast<std::ptrdiff_t>(plan.p1));
    if (reduced.abs() > Dyadic(Integer(1), 3) + slack.ldexp(-static_cast<std::ptrdiff_t>(plan.p1))) {
        throw reduction_error("reduced argument exceeds 2^-3");
    }
    return truncate_at(reduced, plan.m);
}

template <typename Value>
Value block_product(const Dyadic& xm, const PrecisionPlan& plan, Method method) {
    const BlockDecomposition dec = decompose_blocks(xm, plan.m, plan.k);
    if (method == Method::classic) {
        return fee_product<Value>(dec, plan.n3, ClassicBlocks{});
    }
    return fee_product<Value>(dec, plan.n3, LinearSpaceBlocks{});
}

template <typename Value>
Value finish(const Value& reduced_exp, const PrecisionPlan& plan) {
    return truncate_at(pow_by_squaring(reduced_exp, plan.s, plan.w), plan.n + 2);
}

}  // namespace detail

/// exp(x) within 2^-n for |x| <= 2^p. The result has n + 2 fractional bits.
inline Dyadic exp_real(const ArgumentOracle& x, std::size_t n, unsigned p, Method method = Method::linspace) {
    const PrecisionPlan plan = plan_precision(n, p);
    const Dyadic xm = detail::reduce_argument(x, plan);
    return detail::finish(detail::block_product<Dyadic>(xm, plan, method), plan);
}

/// exp(i y) within 2^-n per component for |y| <= 2^p.
inline ComplexDyadic exp_imaginary(const ArgumentOracle& y, std::size_t n, unsigned p,
                                   Method method = Method::linspace) {
    const PrecisionPlan plan = plan_precision(n, p);
    const Dyadic ym = detail::reduce_argument(y, plan);
    return detail::finish(detail::block_product<ComplexDyadic>(ym, plan, method), plan);
}

/// exp(x + i y) within 2^-n in modulus for |x|, |y| <= 2^p, as the s-th
/// power of exp(x') exp(i y').
inline ComplexDyadic exp_complex(const ArgumentOracle& x, const ArgumentOracle& y, std::size_t n, unsigned p,
                                 Method method = Method::linspace) {
    const PrecisionPlan plan = plan_precision(n, p);
    const Dyadic xm = detail::reduce_argument(x, plan);
    const Dyadic ym = detail::reduce_argument(y, plan);
    const Dyadic v1 = detail::block_product<Dyadic>(xm, plan, method);
    const ComplexDyadic v2 = detail::block_product<ComplexDyadic>(ym, plan, method);
    return detail::finish(ComplexDyadic(v1 * v2.re, v1 * v2.im), plan);
}

inline constexpr std::size_t kDerivedGuardBits = 4;

/// sin z = (e^{iz} - e^{-iz}) / (2i), with iz = -y + i x.
inline ComplexDyadic sin_complex(const ArgumentOracle& x, const ArgumentOracle& y, std::size_t n, unsigned p,
                                 Method method = Method::linspace) {
    const std::size_t g = std::max<std::size_t>(n, 1) + kDerivedGuardBits;
    const ComplexDyadic a = exp_complex(y.negated(), x, g, p, method);
    const ComplexDyadic b = exp_complex(y, x.negated(), g, p, method);
    return truncate_at((a - b).rotated(3).ldexp(-1), std::max<std::size_t>(n, 1) + 2);
}

/// cos z = (e^{iz} + e^{-iz}) / 2.
inline ComplexDyadic cos_complex(const ArgumentOracle& x, const ArgumentOracle& y, std::size_t n, unsigned p,
                                 Method method = Method::linspace) {
    const std::size_t g = std::max<std::size_t>(n, 1) + kDerivedGuardBits;
    const ComplexDyadic a = exp_complex(y.negated(), x, g, p, method);
    const ComplexDyadic b = exp_complex(y, x.negated(), g, p, method);
    return truncate_at((a + b).ldexp(-1), std::max<std::size_t>(n, 1) + 2);
}

/// sinh z = (e^z - e^{-z}) / 2.
inline ComplexDyadic sinh_complex(const ArgumentOracle& x, const ArgumentOracle& y, std::size_t n, unsigned p,
                                  Method method = Method::linspace) {
    const std::size_t g = std::max<std::size_t>(n, 1) + kDerivedGuardBits;
    const ComplexDyadic a = exp_complex(x, y, g, p, method);
    const ComplexDyadic b = exp_complex(x.negated(), y.negated(), g, p, method);
    return truncate_at((a - b).ldexp(-1), std::max<std::size_t>(n, 1) + 2);
}

/// cosh z = (e^z + e^{-z}) / 2.
inline ComplexDyadic cosh_complex(const ArgumentOracle& x, const ArgumentOracle& y, std::size_t n, unsigned p,
                                  Method method = Method::linspace) {
    const std::size_t g = std::max<std::size_t>(n, 1) + kDerivedGuardBits;
    const ComplexDyadic a = exp_complex(x, y, g, p, method);
    const ComplexDyadic b = exp_complex(x.negated(), y.negated(), g, p, method);
    return truncate_at((a + b).ldexp(-1), std::max<std::size_t>(n, 1) + 2);
}

}  // namespace linexp
