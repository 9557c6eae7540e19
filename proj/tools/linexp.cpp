// linexp command-line front end: single evaluations and the method benchmark.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "linexp/alloc_hook.hpp"
#include "linexp/bench.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Options {
    std::string function = "exp";
    std::string re;
    std::string im;
    std::size_t bits = 64;
    unsigned area_p = 0;
    std::string method = "linspace";
    std::string format = "bin";
    std::string stats;

    std::vector<std::size_t> bits_list;
    std::vector<std::string> methods{"linspace", "classic"};
    unsigned reps = 1;
    std::string out;
};

class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

linexp::Method parse_method(const std::string& name) {
    if (name == "linspace") {
        return linexp::Method::linspace;
    }
    if (name == "classic") {
        return linexp::Method::classic;
    }
    throw usage_error("unknown method '" + name + "' (expected linspace or classic)");
}

linexp::TextFormat parse_format(const std::string& name) {
    if (name == "bin") {
        return linexp::TextFormat::bin;
    }
    if (name == "hex") {
        return linexp::TextFormat::hex;
    }
    if (name == "dec") {
        return linexp::TextFormat::dec;
    }
    throw usage_error("unknown format '" + name + "' (expected bin, hex or dec)");
}

linexp::bench::Request base_request(const Options& o) {
    linexp::bench::Request r;
    const auto f = linexp::bench::parse_function(o.function);
    if (!f) {
        throw usage_error("unknown function '" + o.function + "'");
    }
    r.function = *f;
    r.p = o.area_p;
    r.format = parse_format(o.format);
    if (!o.im.empty()) {
        r.im = linexp::ArgumentOracle::constant(linexp::parse_dyadic(o.im));
    }
    return r;
}

bool write_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream file(path, std::ios::out | std::ios::trunc);
    if (!file) {
        return false;
    }
    for (const auto& line : lines) {
        file << line << '\n';
    }
    file.flush();
    return static_cast<bool>(file);
}

int run_eval(const Options& o) {
    linexp::bench::Request r = base_request(o);
    r.re = linexp::ArgumentOracle::constant(linexp::parse_dyadic(o.re));
    r.n = o.bits;
    r.method = parse_method(o.method);
    const linexp::bench::RunStats stats = linexp::bench::run(r);
    std::cout << stats.result << '\n';
    if (!o.stats.empty()) {
        if (!write_lines(o.stats, {nlohmann::json(stats).dump()})) {
            std::cerr << "error: cannot write stats file '" << o.stats << "'\n";
            return kExitIo;
        }
    }
    return kExitOk;
}

int run_bench(const Options& o) {
    linexp::bench::Request base = base_request(o);
    // The default argument 1/3 has every block nonzero.
    base.re = o.re.empty() ? linexp::ArgumentOracle::rational(linexp::Integer(1), linexp::Integer(3))
                           : linexp::ArgumentOracle::constant(linexp::parse_dyadic(o.re));
    std::vector<linexp::Method> methods;
    for (const auto& name : o.methods) {
        methods.push_back(parse_method(name));
    }
    std::ofstream file(o.out, std::ios::out | std::ios::trunc);
    if (!file) {
        std::cerr << "error: cannot open '" << o.out << "' for writing\n";
        return kExitIo;
    }
    for (std::size_t bits : o.bits_list) {
        for (linexp::Method method : methods) {
            for (unsigned rep = 0; rep < o.reps; ++rep) {
                linexp::bench::Request r = base;
                r.n = bits;
                r.method = method;
                linexp::bench::RunStats stats = linexp::bench::run(r);
                std::cerr << "bits=" << bits << " method=" << stats.method << " rep=" << rep
                          << " peak_bytes=" << stats.peak_bytes << " wall_ms=" << stats.wall_ns / 1000000 << '\n';
                file << nlohmann::json(stats).dump() << '\n';
                file.flush();
                if (!file) {
                    std::cerr << "error: write to '" << o.out << "' failed\n";
                    return kExitIo;
                }
            }
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constructive exp, sin, cos, sinh and cosh of dyadic arguments"};
    app.require_subcommand(1);
    Options o;

    const std::vector<std::string> functions{"exp", "expi", "sin", "cos", "sinh", "cosh"};
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--function", o.function, "exp, expi, sin, cos, sinh or cosh")
            ->check(CLI::IsMember(functions));
        cmd->add_option("--im", o.im, "imaginary part of the argument (dyadic)");
        cmd->add_option("--area-p", o.area_p, "area exponent p, requires |re|, |im| <= 2^p")
            ->check(CLI::Range(0U, linexp::kMaxAreaExponent));
        cmd->add_option("--format", o.format, "output format: bin, hex or dec")
            ->check(CLI::IsMember({"bin", "hex", "dec"}));
    };

    CLI::App* eval = app.add_subcommand("eval", "evaluate one function value");
    add_common(eval);
    eval->add_option("--re", o.re, "real part of the argument: 0xHHHp-E, integer, or binary digits with a point")
        ->required();
    eval->add_option("--bits", o.bits, "accuracy n, result within 2^-n")->check(CLI::Range(1U, 1U << 26));
    eval->add_option("--method", o.method, "linspace or classic")->check(CLI::IsMember({"linspace", "classic"}));
    eval->add_option("--stats", o.stats, "write run statistics as one JSON line to this file");

    CLI::App* bench = app.add_subcommand("bench", "time and measure both methods over a list of accuracies");
    add_common(bench);
    bench->add_option("--re", o.re, "real part of the argument (default 1/3)");
    bench->add_option("--bits-list", o.bits_list, "comma separated accuracies")
        ->required()
        ->delimiter(',')
        ->check(CLI::Range(1U, 1U << 26));
    bench->add_option("--methods", o.methods, "comma separated methods")
        ->delimiter(',')
        ->check(CLI::IsMember({"linspace", "classic"}));
    bench->add_option("--reps", o.reps, "repetitions per configuration")->check(CLI::Range(1U, 1000U));
    bench->add_option("--out", o.out, "NDJSON output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (eval->parsed()) {
            return run_eval(o);
        }
        return run_bench(o);
    } catch (const linexp::parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
    } catch (const linexp::reduction_error& e) {
        std::cerr << "error: " << e.what() << '\n';
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return kExitUsage;
}
