// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any selected criterion fails.
//
//   acceptance            run every criterion
//   acceptance 1 4 7      run the listed criteria

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "linexp/alloc_hook.hpp"
#include "linexp/bench.hpp"
#include "linexp/dyadic_io.hpp"
#include "linexp/expfuncs.hpp"
#include "linexp/reference.hpp"
#include "support/exact_blocks.hpp"
#include "support/random.hpp"

namespace {

using linexp::ArgumentOracle;
using linexp::ComplexDyadic;
using linexp::Dyadic;
using linexp::Integer;
using linexp::Method;

struct Outcome {
    bool pass = true;
    std::string detail;
};

Dyadic pow2(std::ptrdiff_t e) { return Dyadic(Integer(1), 0).ldexp(e); }

/// |a - b| <= 2^-bits
bool close(const Dyadic& a, const Dyadic& b, std::ptrdiff_t bits) { return (a - b).abs() <= pow2(-bits); }

/// |a - b| <= 2^-bits in modulus.
bool close_modulus(const ComplexDyadic& a, const ComplexDyadic& b, std::ptrdiff_t bits) {
    const Dyadic dr = a.re - b.re;
    const Dyadic di = a.im - b.im;
    return dr * dr + di * di <= pow2(-2 * bits);
}

/// Largest e with |a - b| <= 2^-e, for reporting.
long error_exponent(const ComplexDyadic& a, const ComplexDyadic& b) {
    const Dyadic dr = (a.re - b.re).abs();
    const Dyadic di = (a.im - b.im).abs();
    const Dyadic d = dr > di ? dr : di;
    if (d.is_zero()) {
        return 1L << 20;
    }
    return static_cast<long>(d.scale()) - static_cast<long>(d.mantissa().bit_length());
}

ComplexDyadic sq(const ComplexDyadic& v) { return v * v; }

// Three draws in four are uniform over the range; the fourth has a uniformly
// random bit length, so small magnitudes are covered too.
Dyadic random_arg(std::mt19937_64& rng, std::size_t bits, std::ptrdiff_t mag) {
    if (rng() % 4 == 0) {
        return linexp::testing::random_dyadic(rng, bits, mag);
    }
    return linexp::testing::uniform_dyadic(rng, bits, mag);
}

// Random z with |z| < 2^p: each component below 2^(p-1).
std::pair<Dyadic, Dyadic> random_z(std::mt19937_64& rng, std::size_t bits, unsigned p) {
    const auto mag = static_cast<std::ptrdiff_t>(p) - 1;
    Dyadic x = random_arg(rng, bits, mag);
    return {std::move(x), random_arg(rng, bits, mag)};
}

struct BoundTally {
    std::uint64_t horner = 0;
    std::uint64_t product = 0;
    std::uint64_t violations = 0;
};

// Criterion 1 workload, shared with criterion 3.
Outcome oracle_runs(BoundTally& tally) {
    Outcome out;
    std::mt19937_64 rng(0xC1);
    std::ostringstream detail;
    for (std::size_t n : {64U, 256U, 1024U}) {
        for (unsigned p : {0U, 2U}) {
            long worst = 1L << 20;
            int failures = 0;
            for (int trial = 0; trial < 100; ++trial) {
                const auto [x, y] = random_z(rng, n + 16, p);
                const auto ox = ArgumentOracle::constant(x);
                const auto oy = ArgumentOracle::constant(y);
                const ComplexDyadic ref = linexp::reference::exp_complex(x, y, n + 16);
                const auto nb = static_cast<std::ptrdiff_t>(n);
                bool ok = true;
                try {
                    linexp::instrument::reset();
                    const ComplexDyadic v = linexp::exp_complex(ox, oy, n, p);
                    tally.horner += linexp::instrument::counters().horner_bound_checks;
                    tally.product += linexp::instrument::counters().product_bound_checks;
                    ok = ok && close_modulus(v, ref, nb);
                    worst = std::min(worst, error_exponent(v, ref));

                    linexp::instrument::reset();
                    const Dyadic vr = linexp::exp_real(ox, n, p);
                    tally.horner += linexp::instrument::counters().horner_bound_checks;
                    tally.product += linexp::instrument::counters().product_bound_checks;
                    ok = ok && close(vr, linexp::reference::exp(x, n + 16), nb - 1);

                    linexp::instrument::reset();
                    const ComplexDyadic vi = linexp::exp_imaginary(oy, n, p);
                    tally.horner += linexp::instrument::counters().horner_bound_checks;
                    tally.product += linexp::instrument::counters().product_bound_checks;
                    const ComplexDyadic ri = linexp::reference::expi(y, n + 16);
                    ok = ok && close(vi.re, ri.re, nb - 1) && close(vi.im, ri.im, nb - 1);
                } catch (const linexp::bound_violation& e) {
                    ++tally.violations;
                    ok = false;
                    std::cerr << "bound violation: " << e.what() << '\n';
                }
                if (!ok) {
                    ++failures;
                }
            }
            detail << " (n=" << n << ",p=" << p << "): " << (100 - failures) << "/100, worst 2^-" << worst << ";";
            out.pass = out.pass && failures == 0;
        }
    }
    out.detail = detail.str();
    return out;
}

Outcome criterion1() {
    BoundTally tally;
    return oracle_runs(tally);
}

Outcome criterion2() {
    Outcome out;
    std::mt19937_64 rng(0xC2);
    std::ostringstream detail;
    for (std::size_t n : {64U, 1024U}) {
        int both_close = 0;
        int identical = 0;
        for (int trial = 0; trial < 20; ++trial) {
            const Dyadic x = random_arg(rng, n + 16, -3);
            const auto ox = ArgumentOracle::constant(x);
            const Dyadic ref = linexp::reference::exp(x, n + 16);
            const Dyadic a = linexp::exp_real(ox, n, 0, Method::linspace);
            const Dyadic b = linexp::exp_real(ox, n, 0, Method::classic);
            const auto nb = static_cast<std::ptrdiff_t>(n);
            if (close(a, ref, nb) && close(b, ref, nb)) {
                ++both_close;
            }
            if (linexp::format_bin(a, n) == linexp::format_bin(b, n)) {
                ++identical;
            }
        }
        detail << " n=" << n << ": both within 2^-n of the oracle " << both_close << "/20, identical n-bit text "
               << identical << "/20;";
        out.pass = out.pass && both_close == 20;
    }
    out.detail = detail.str();
    return out;
}

Outcome criterion3() {
    Outcome out;
    std::ostringstream detail;

    BoundTally tally;
    (void)oracle_runs(tally);
    const bool runtime_ok = tally.violations == 0 && tally.horner > 0 && tally.product > 0;
    detail << " runtime checks over criterion-1 runs: " << tally.horner << " Horner, " << tally.product
           << " product, " << tally.violations << " violations;";

    // Horner error bound 2^(-m1+i) for every block and product error bound
    // 2^(-m+2i) for the block product, over 50 random arguments at m in
    // {32, 64} in both modes.
    std::mt19937_64 rng(0xC3);
    int horner_error_fail = 0;
    int product_error_fail = 0;
    std::size_t blocks_checked = 0;
    using linexp::testing::ComplexRational;
    using linexp::testing::crat;
    using linexp::testing::Rational;
    for (int config = 0; config < 50; ++config) {
        const unsigned k = config % 2 == 0 ? 4 : 5;
        const std::size_t m = std::size_t{1} << (k + 1);
        const bool imaginary = config % 4 >= 2;
        const linexp::Mode mode = imaginary ? linexp::Mode::imaginary : linexp::Mode::real;
        const Dyadic x = random_arg(rng, m, -2);
        const auto dec = linexp::decompose_blocks(x, m, k);

        std::vector<ComplexRational> product(k + 2);
        ComplexRational acc = crat(Rational(Integer(1)));
        for (const auto& b : dec.blocks) {
            const auto bp = linexp::BlockParams::make(b.beta, b.nu, m, mode);
            const auto exact = linexp::testing::exact_horner(bp);
            auto check4 = [&](std::size_t i, const auto& h) {
                ComplexRational got;
                if constexpr (std::is_same_v<std::decay_t<decltype(h)>, Dyadic>) {
                    got = crat(Rational::from(h));
                } else {
                    got = crat(h);
                }
                if (!linexp::testing::within(got, exact[i],
                                             static_cast<std::ptrdiff_t>(bp.m1) - static_cast<std::ptrdiff_t>(i))) {
                    ++horner_error_fail;
                }
            };
            if (imaginary) {
                (void)linexp::eval_p_gamma<ComplexDyadic>(bp, check4);
            } else {
                (void)linexp::eval_p_gamma<Dyadic>(bp, check4);
            }
            ++blocks_checked;

            const Dyadic gamma(b.beta, std::size_t{1} << b.nu);
            acc = acc * (imaginary ? crat(linexp::reference::expi(gamma, 8 * m))
                                   : crat(Rational::from(linexp::reference::exp(gamma, 8 * m))));
            product[b.nu] = acc;
        }
        auto check6 = [&](std::size_t i, const auto& h) {
            ComplexRational got;
            if constexpr (std::is_same_v<std::decay_t<decltype(h)>, Dyadic>) {
                got = crat(Rational::from(h));
            } else {
                got = crat(h);
            }
            if (!linexp::testing::within(got, product[i],
                                         static_cast<std::ptrdiff_t>(m) - 2 * static_cast<std::ptrdiff_t>(i))) {
                ++product_error_fail;
            }
        };
        const std::size_t n3 = (std::size_t{1} << k) - 1;
        if (imaginary) {
            (void)linexp::fee_product<ComplexDyadic>(dec, n3, linexp::LinearSpaceBlocks{}, check6);
        } else {
            (void)linexp::fee_product<Dyadic>(dec, n3, linexp::LinearSpaceBlocks{}, check6);
        }
    }
    detail << " Horner error bound failures " << horner_error_fail << " over " << blocks_checked << " blocks;"
           << " product error bound failures " << product_error_fail << " over 50 products;";
    out.pass = runtime_ok && horner_error_fail == 0 && product_error_fail == 0;
    out.detail = detail.str();
    return out;
}

std::vector<linexp::bench::RunStats> measure(Method method, const std::vector<std::size_t>& bits, int reps) {
    std::vector<linexp::bench::RunStats> out;
    for (std::size_t n : bits) {
        std::vector<linexp::bench::RunStats> runs;
        for (int rep = 0; rep < reps; ++rep) {
            linexp::bench::Request r;
            r.function = linexp::bench::Function::exp;
            r.re = ArgumentOracle::rational(Integer(1), Integer(3));
            r.n = n;
            r.method = method;
            runs.push_back(linexp::bench::run(r));
        }
        std::sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) { return a.wall_ns < b.wall_ns; });
        out.push_back(runs[runs.size() / 2]);
    }
    return out;
}

Outcome criterion4() {
    Outcome out;
    if (!linexp::memory::hook_installed()) {
        return {false, " allocation hook not installed"};
    }
    const std::vector<std::size_t> bits{1U << 12, 1U << 13, 1U << 14, 1U << 15, 1U << 16};
    const auto lin = measure(Method::linspace, bits, 1);
    const auto cls = measure(Method::classic, bits, 1);

    // Least-squares line peak = a n + b and its R^2.
    const double count = static_cast<double>(bits.size());
    double sx = 0;
    double sy = 0;
    double sxx = 0;
    double sxy = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const auto x = static_cast<double>(bits[i]);
        const auto y = static_cast<double>(lin[i].peak_bytes);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double a = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    const double b = (sy - a * sx) / count;
    const double mean = sy / count;
    double ss_res = 0;
    double ss_tot = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const auto x = static_cast<double>(bits[i]);
        const auto y = static_cast<double>(lin[i].peak_bytes);
        ss_res += (y - (a * x + b)) * (y - (a * x + b));
        ss_tot += (y - mean) * (y - mean);
    }
    const double r2 = 1.0 - ss_res / ss_tot;
    const double lin_ratio =
        static_cast<double>(lin.back().peak_bytes) / static_cast<double>(lin.front().peak_bytes);
    const double cls_ratio =
        static_cast<double>(cls.back().peak_bytes) / static_cast<double>(cls.front().peak_bytes);

    std::ostringstream detail;
    detail << " linspace peak bytes";
    for (const auto& s : lin) {
        detail << ' ' << s.peak_bytes;
    }
    detail << "; classic peak bytes";
    for (const auto& s : cls) {
        detail << ' ' << s.peak_bytes;
    }
    detail << "; fit a=" << a << " b=" << b << " R^2=" << r2 << "; ratio linspace " << lin_ratio << " (<= 20), classic "
           << cls_ratio << " (> linspace)";
    out.detail = detail.str();
    out.pass = r2 >= 0.98 && lin_ratio <= 20.0 && cls_ratio > lin_ratio;
    return out;
}

Outcome criterion5() {
    const std::vector<std::size_t> bits{1U << 14, 1U << 15, 1U << 16};
    const auto lin = measure(Method::linspace, bits, 3);
    std::ostringstream detail;
    bool pass = true;
    detail << " median wall ms";
    for (const auto& s : lin) {
        detail << ' ' << s.wall_ns / 1000000;
    }
    detail << "; ratios";
    for (std::size_t i = 0; i + 1 < lin.size(); ++i) {
        const double ratio = static_cast<double>(lin[i + 1].wall_ns) / static_cast<double>(lin[i].wall_ns);
        detail << ' ' << ratio;
        pass = pass && ratio <= 8.0;
    }
    detail << " (each <= 8)";
    return {pass, detail.str()};
}

Outcome criterion6() {
    const std::size_t n = 256;
    const auto nb = static_cast<std::ptrdiff_t>(n);
    const ComplexDyadic one(Dyadic(1));
    std::mt19937_64 rng(0xC6);
    int ok_exp = 0;
    int ok_trig = 0;
    int ok_hyp = 0;
    int ok_mod = 0;
    for (int trial = 0; trial < 25; ++trial) {
        {
            const auto [x, y] = random_z(rng, n + 8, 1);
            const auto ox = ArgumentOracle::constant(x);
            const auto oy = ArgumentOracle::constant(y);
            const ComplexDyadic a = linexp::exp_complex(ox, oy, n, 1);
            const ComplexDyadic b = linexp::exp_complex(ox.negated(), oy.negated(), n, 1);
            ok_exp += close_modulus(a * b, one, nb - 4) ? 1 : 0;
        }
        {
            const auto [x, y] = random_z(rng, n + 8, 1);
            const auto ox = ArgumentOracle::constant(x);
            const auto oy = ArgumentOracle::constant(y);
            const ComplexDyadic s = linexp::sin_complex(ox, oy, n, 1);
            const ComplexDyadic c = linexp::cos_complex(ox, oy, n, 1);
            ok_trig += close_modulus(sq(s) + sq(c), one, nb - 4) ? 1 : 0;
        }
        {
            const auto [x, y] = random_z(rng, n + 8, 1);
            const auto ox = ArgumentOracle::constant(x);
            const auto oy = ArgumentOracle::constant(y);
            const ComplexDyadic s = linexp::sinh_complex(ox, oy, n, 1);
            const ComplexDyadic c = linexp::cosh_complex(ox, oy, n, 1);
            ok_hyp += close_modulus(sq(c) - sq(s), one, nb - 4) ? 1 : 0;
        }
        {
            const Dyadic y = random_arg(rng, n + 8, 2);
            const ComplexDyadic v = linexp::exp_imaginary(ArgumentOracle::constant(y), n, 2);
            // ||v|^2 - 1| <= 2^(-n+4) implies ||v| - 1| <= 2^(-n+4).
            ok_mod += close(v.re * v.re + v.im * v.im, Dyadic(1), nb - 4) ? 1 : 0;
        }
    }
    std::ostringstream detail;
    detail << " exp(z)exp(-z)=1 " << ok_exp << "/25, sin^2+cos^2=1 " << ok_trig << "/25, cosh^2-sinh^2=1 " << ok_hyp
           << "/25, |exp(iy)|=1 " << ok_mod << "/25";
    return {ok_exp == 25 && ok_trig == 25 && ok_hyp == 25 && ok_mod == 25, detail.str()};
}

Outcome criterion7() {
    const std::string e_digits = "2.71828182845904523536028747135266249775";
    const std::string sin_digits = "0.84147098480789650665250232163029899962";
    const Dyadic e = linexp::exp_real(ArgumentOracle::constant(Dyadic(1)), 128, 0);
    const std::string e_text = linexp::format_dec(e, 128);
    const ComplexDyadic s = linexp::sin_complex(ArgumentOracle::constant(Dyadic(1)), ArgumentOracle::zero(), 128, 0);
    const std::string s_text = linexp::format_dec(s.re, 128);
    const std::string e_ref = linexp::format_dec(linexp::reference::exp(Dyadic(1), 128), 128);
    const std::string s_ref = linexp::format_dec(linexp::reference::expi(Dyadic(1), 128).im, 128);

    const bool e_ok = e_text.substr(0, 32) == e_digits.substr(0, 32) && e_ref.substr(0, 32) == e_digits.substr(0, 32);
    const bool s_ok = s_text.substr(0, 22) == sin_digits.substr(0, 22) && s_ref.substr(0, 22) == sin_digits.substr(0, 22);
    std::ostringstream detail;
    detail << " e = " << e_text.substr(0, 32) << " (30 digits " << (e_ok ? "match" : "differ") << "), sin(1) = "
           << s_text.substr(0, 22) << " (20 digits " << (s_ok ? "match" : "differ") << ")";
    return {e_ok && s_ok, detail.str()};
}

Outcome criterion8() {
    std::mt19937_64 rng(0xC8);
    int mul_fail = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Integer a = linexp::testing::random_integer_upto(rng, 1U << 13);
        const Integer b = linexp::testing::random_integer_upto(rng, 1U << 13);
        const Integer school = linexp::mul_schoolbook(a, b);
        if (a * b != school || multiply(a, b, 2) != school) {
            ++mul_fail;
        }
    }
    int trunc_fail = 0;
    for (int trial = 0; trial < 100000; ++trial) {
        const std::size_t scale = rng() % 200;
        const Dyadic x = linexp::testing::random_dyadic(rng, scale, static_cast<std::ptrdiff_t>(rng() % 64));
        const std::size_t b = rng() % 220;
        const Dyadic t = linexp::truncate_at(x, b);
        const bool ok = t.scale() <= b && (x - t).abs() < pow2(-static_cast<std::ptrdiff_t>(b)) && t.abs() <= x.abs() &&
                        (t.is_zero() || t.sign() == x.sign());
        if (!ok) {
            ++trunc_fail;
        }
    }
    std::ostringstream detail;
    detail << " Karatsuba vs schoolbook mismatches " << mul_fail << "/1000; truncate_at postcondition failures "
           << trunc_fail << "/100000";
    return {mul_fail == 0 && trunc_fail == 0, detail.str()};
}

}  // namespace

int main(int argc, char** argv) {
    const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria{
        {1, {"oracle correctness", criterion1}},     {2, {"cross-method equivalence", criterion2}},
        {3, {"error bound suite", criterion3}},            {4, {"space linearity", criterion4}},
        {5, {"time quasi-linearity", criterion5}},   {6, {"identity suite", criterion6}},
        {7, {"known digits", criterion7}},           {8, {"bignum foundation", criterion8}},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int id = std::atoi(argv[i]);
        if (criteria.count(id) == 0) {
            std::cerr << "unknown criterion '" << argv[i] << "'\n";
            return 2;
        }
        selected.push_back(id);
    }
    if (selected.empty()) {
        for (const auto& [id, entry] : criteria) {
            selected.push_back(id);
        }
    }
    bool all = true;
    for (int id : selected) {
        const auto& [name, fn] = criteria.at(id);
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string(" exception: ") + e.what()};
        }
        const auto secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "):" << o.detail << " ["
                  << secs << " s]" << std::endl;
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
