#pragma once

// One instrumented evaluation: result, peak heap bytes above the starting
// level, deepest binary-splitting recursion and wall time.

#include <chrono>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "linexp/dyadic_io.hpp"
#include "linexp/expfuncs.hpp"
#include "linexp/instrument.hpp"

namespace linexp::bench {

enum class Function { exp, expi, sin, cos, sinh, cosh };

inline const char* to_string(Function f) {
    switch (f) {
        case Function::expi:
            return "expi";
        case Function::sin:
            return "sin";
        case Function::cos:
            return "cos";
        case Function::sinh:
            return "sinh";
        case Function::cosh:
            return "cosh";
        default:
            return "exp";
    }
}

inline std::optional<Function> parse_function(std::string_view name) {
    for (Function f : {Function::exp, Function::expi, Function::sin, Function::cos, Function::sinh, Function::cosh}) {
        if (name == to_string(f)) {
            return f;
        }
    }
    return std::nullopt;
}

struct Request {
    Function function = Function::exp;
    ArgumentOracle re = ArgumentOracle::zero();
    std::optional<ArgumentOracle> im;  // absent: real argument
    std::size_t n = 64;
    unsigned p = 0;
    Method method = Method::linspace;
    TextFormat format = TextFormat::bin;
};

struct RunStats {
    std::string function;
    std::size_t n = 0;
    unsigned p = 0;
    std::string method;
    std::size_t peak_bytes = 0;
    std::size_t max_depth = 0;
    std::uint64_t wall_ns = 0;
    std::string result;
};

inline void to_json(nlohmann::json& j, const RunStats& s) {
    j = nlohmann::json{{"function", s.function}, {"n", s.n},           {"p", s.p},
                       {"method", s.method},     {"peak_bytes", s.peak_bytes}, {"max_depth", s.max_depth},
                       {"wall_ns", s.wall_ns},   {"result", s.result}};
}

/// Real arguments of exp, sin, cos, sinh and cosh give a real result; every
/// other combination is complex.
inline bool real_result(const Request& r) { return !r.im && r.function != Function::expi; }

inline ComplexDyadic evaluate(const Request& r) {
    const ArgumentOracle im = r.im.value_or(ArgumentOracle::zero());
    switch (r.function) {
        case Function::expi:
            if (r.im) {
                throw std::invalid_argument("expi takes a real argument; use exp for complex arguments");
            }
            return exp_imaginary(r.re, r.n, r.p, r.method);
        case Function::sin:
            return sin_complex(r.re, im, r.n, r.p, r.method);
        case Function::cos:
            return cos_complex(r.re, im, r.n, r.p, r.method);
        case Function::sinh:
            return sinh_complex(r.re, im, r.n, r.p, r.method);
        case Function::cosh:
            return cosh_complex(r.re, im, r.n, r.p, r.method);
        default:
            if (!r.im) {
                return ComplexDyadic(exp_real(r.re, r.n, r.p, r.method));
            }
            return exp_complex(r.re, im, r.n, r.p, r.method);
    }
}

/// "<re>" for real results, "<re> <im>" otherwise, each with exactly n
/// fractional bits in the requested format.
inline std::string render(const ComplexDyadic& v, const Request& r) {
    std::string out = format_dyadic(v.re, r.n, r.format);
    if (!real_result(r)) {
        out += ' ';
        out += format_dyadic(v.im, r.n, r.format);
    }
    return out;
}

inline RunStats run(const Request& r) {
    instrument::reset();
    ComplexDyadic value;
    std::size_t peak = 0;
    const auto start = std::chrono::steady_clock::now();
    {
        memory::PeakScope scope;
        value = evaluate(r);
        peak = scope.peak_bytes();
    }
    const auto stop = std::chrono::steady_clock::now();
    RunStats s;
    s.function = to_string(r.function);
    s.n = r.n;
    s.p = r.p;
    s.method = linexp::to_string(r.method);
    s.peak_bytes = peak;
    s.max_depth = instrument::counters().max_depth;
    const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
    s.wall_ns = ns > 0 ? static_cast<std::uint64_t>(ns) : 1;
    s.result = render(value, r);
    return s;
}

}  // namespace linexp::bench
