#pragma once

// Unsigned limb-vector kernels shared by Integer. All routines operate on
// little-endian spans of 64-bit limbs; callers own normalization.

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace linexp::detail {

using limb = std::uint64_t;
using dlimb = unsigned __int128;

inline constexpr unsigned kLimbBits = 64;

/// Default limb count below which multiplication falls back to schoolbook.
inline constexpr std::size_t kKaratsubaThreshold = 32;

inline std::size_t normalized_size(const limb* a, std::size_t n) {
    while (n > 0 && a[n - 1] == 0) {
        --n;
    }
    return n;
}

inline int compare(const limb* a, std::size_t an, const limb* b, std::size_t bn) {
    if (an != bn) {
        return an < bn ? -1 : 1;
    }
    for (std::size_t i = an; i-- > 0;) {
        if (a[i] != b[i]) {
            return a[i] < b[i] ? -1 : 1;
        }
    }
    return 0;
}

// r[0..an) = a + b, an >= bn. Returns the outgoing carry. r may alias a.
inline limb add(limb* r, const limb* a, std::size_t an, const limb* b, std::size_t bn) {
    limb carry = 0;
    std::size_t i = 0;
    for (; i < bn; ++i) {
        limb s = a[i] + carry;
        limb c1 = s < carry;
        limb t = s + b[i];
        limb c2 = t < s;
        r[i] = t;
        carry = c1 | c2;
    }
    for (; i < an; ++i) {
        limb t = a[i] + carry;
        carry = t < carry;
        r[i] = t;
    }
    return carry;
}

// r[0..an) = a - b, requires a >= b as numbers. Returns the outgoing borrow.
inline limb sub(limb* r, const limb* a, std::size_t an, const limb* b, std::size_t bn) {
    limb borrow = 0;
    std::size_t i = 0;
    for (; i < bn; ++i) {
        limb ai = a[i];
        limb t = ai - b[i];
        limb b1 = ai < b[i];
        limb u = t - borrow;
        limb b2 = t < borrow;
        r[i] = u;
        borrow = b1 | b2;
    }
    for (; i < an; ++i) {
        limb ai = a[i];
        r[i] = ai - borrow;
        borrow = ai < borrow;
    }
    return borrow;
}

// Adds b into r[0..rn) in place, propagating the carry to the end.
inline limb add_into(limb* r, std::size_t rn, const limb* b, std::size_t bn) {
    assert(rn >= bn);
    return add(r, r, rn, b, bn);
}

inline limb sub_from(limb* r, std::size_t rn, const limb* b, std::size_t bn) {
    assert(rn >= bn);
    return sub(r, r, rn, b, bn);
}

// r[0..an+bn) = a * b, schoolbook. r must not alias a or b.
inline void mul_basecase(limb* r, const limb* a, std::size_t an, const limb* b, std::size_t bn) {
    std::fill(r, r + an + bn, limb{0});
    for (std::size_t j = 0; j < bn; ++j) {
        const limb bj = b[j];
        if (bj == 0) {
            continue;
        }
        limb carry = 0;
        for (std::size_t i = 0; i < an; ++i) {
            dlimb t = static_cast<dlimb>(a[i]) * bj + r[i + j] + carry;
            r[i + j] = static_cast<limb>(t);
            carry = static_cast<limb>(t >> kLimbBits);
        }
        r[an + j] = carry;
    }
}

inline void mul(limb* r, const limb* a, std::size_t an, const limb* b, std::size_t bn, std::size_t threshold);

// Two-way Karatsuba split for operands of comparable length:
// an >= bn > an / 2, and bn >= threshold.
inline void mul_karatsuba(limb* r, const limb* a, std::size_t an, const limb* b, std::size_t bn,
                          std::size_t threshold) {
    const std::size_t lo = (an + 1) / 2;
    const std::size_t a1n = an - lo;
    const std::size_t b0n = std::min(lo, bn);
    const std::size_t b1n = bn - b0n;
    const std::size_t rn = an + bn;

    if (b1n == 0) {
        // b fits entirely in the low half: a0*b + a1*b*B^lo.
        std::fill(r, r + rn, limb{0});
        std::vector<limb> t(lo + bn);
        mul(t.data(), a, lo, b, bn, threshold);
        add_into(r, rn, t.data(), lo + bn);
        t.assign(a1n + bn, 0);
        mul(t.data(), a + lo, a1n, b, bn, threshold);
        add_into(r + lo, rn - lo, t.data(), a1n + bn);
        return;
    }

    // z0 -> r[0, 2lo), z2 -> r[2lo, rn)
    mul(r, a, lo, b, lo, threshold);
    mul(r + 2 * lo, a + lo, a1n, b + lo, b1n, threshold);

    std::vector<limb> sa(lo + 1), sb(lo + 1), z1(2 * lo + 2);
    sa[lo] = add(sa.data(), a, lo, a + lo, a1n);
    sb[lo] = add(sb.data(), b, lo, b + lo, b1n);
    std::size_t san = normalized_size(sa.data(), lo + 1);
    std::size_t sbn = normalized_size(sb.data(), lo + 1);
    std::fill(z1.begin(), z1.end(), limb{0});
    if (san != 0 && sbn != 0) {
        mul(z1.data(), sa.data(), san, sb.data(), sbn, threshold);
    }
    [[maybe_unused]] limb borrow = sub_from(z1.data(), z1.size(), r, 2 * lo);
    assert(borrow == 0);
    borrow = sub_from(z1.data(), z1.size(), r + 2 * lo, rn - 2 * lo);
    assert(borrow == 0);
    std::size_t z1n = normalized_size(z1.data(), z1.size());
    [[maybe_unused]] limb carry = add_into(r + lo, rn - lo, z1.data(), z1n);
    assert(carry == 0);
}

// r[0..an+bn) = a * b with an, bn >= 1. r must not alias a or b.
inline void mul(limb* r, const limb* a, std::size_t an, const limb* b, std::size_t bn, std::size_t threshold) {
    if (an < bn) {
        std::swap(a, b);
        std::swap(an, bn);
    }
    assert(bn >= 1);
    if (bn < threshold || bn < 2) {
        mul_basecase(r, a, an, b, bn);
        return;
    }
    if (2 * bn <= an) {
        // Unbalanced: slice a into bn-limb chunks.
        std::fill(r, r + an + bn, limb{0});
        std::vector<limb> t(2 * bn);
        for (std::size_t off = 0; off < an; off += bn) {
            const std::size_t cn = std::min(bn, an - off);
            mul(t.data(), a + off, cn, b, bn, threshold);
            add_into(r + off, an + bn - off, t.data(), cn + bn);
        }
        return;
    }
    mul_karatsuba(r, a, an, b, bn, threshold);
}

// r = a << shift (bits < 64), returns the bits shifted out of the top.
inline limb shl_bits(limb* r, const limb* a, std::size_t n, unsigned shift) {
    if (shift == 0) {
        std::copy(a, a + n, r);
        return 0;
    }
    limb out = 0;
    for (std::size_t i = 0; i < n; ++i) {
        limb v = a[i];
        r[i] = (v << shift) | out;
        out = v >> (kLimbBits - shift);
    }
    return out;
}

// r = a >> shift (bits < 64). r may alias a.
inline void shr_bits(limb* r, const limb* a, std::size_t n, unsigned shift) {
    if (shift == 0) {
        std::copy(a, a + n, r);
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        limb hi = i + 1 < n ? a[i + 1] : 0;
        r[i] = (a[i] >> shift) | (hi << (kLimbBits - shift));
    }
}

// q = a / d for a single-limb d; returns the remainder. q may alias a.
inline limb divrem_1(limb* q, const limb* a, std::size_t n, limb d) {
    dlimb rem = 0;
    for (std::size_t i = n; i-- > 0;) {
        dlimb cur = (rem << kLimbBits) | a[i];
        q[i] = static_cast<limb>(cur / d);
        rem = cur % d;
    }
    return static_cast<limb>(rem);
}

// Knuth's algorithm D. u has m limbs, v has n >= 2 limbs with v[n-1] != 0,
// m >= n. Writes m-n+1 quotient limbs and n remainder limbs.
inline void divrem_knuth(limb* q, limb* rem, const limb* u, std::size_t m, const limb* v, std::size_t n) {
    assert(n >= 2 && m >= n && v[n - 1] != 0);
    const unsigned s = static_cast<unsigned>(std::countl_zero(v[n - 1]));
    std::vector<limb> vn(n), un(m + 1);
    shl_bits(vn.data(), v, n, s);
    un[m] = shl_bits(un.data(), u, m, s);

    const limb vtop = vn[n - 1];
    const limb vnext = vn[n - 2];
    for (std::size_t j = m - n + 1; j-- > 0;) {
        dlimb num = (static_cast<dlimb>(un[j + n]) << kLimbBits) | un[j + n - 1];
        dlimb qhat = num / vtop;
        dlimb rhat = num % vtop;
        const dlimb base = static_cast<dlimb>(1) << kLimbBits;
        while (qhat >= base || qhat * vnext > ((rhat << kLimbBits) | un[j + n - 2])) {
            --qhat;
            rhat += vtop;
            if (rhat >= base) {
                break;
            }
        }
        const limb qd = static_cast<limb>(qhat);

        limb carry = 0;
        limb borrow = 0;
        for (std::size_t i = 0; i < n; ++i) {
            dlimb p = static_cast<dlimb>(qd) * vn[i] + carry;
            carry = static_cast<limb>(p >> kLimbBits);
            limb plo = static_cast<limb>(p);
            limb uval = un[i + j];
            limb t = uval - plo;
            limb b1 = uval < plo;
            limb d = t - borrow;
            limb b2 = t < borrow;
            un[i + j] = d;
            borrow = b1 | b2;
        }
        limb uval = un[j + n];
        limb t = uval - carry;
        limb b1 = uval < carry;
        limb d = t - borrow;
        limb b2 = t < borrow;
        un[j + n] = d;

        q[j] = qd;
        if (b1 | b2) {
            q[j] = qd - 1;
            limb c = add(un.data() + j, un.data() + j, n, vn.data(), n);
            un[j + n] += c;
        }
    }
    shr_bits(rem, un.data(), n, s);
}

}  // namespace linexp::detail
