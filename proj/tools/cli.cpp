#include "cli.hpp"

#include "wickito/errors.hpp"
#include "wickito/integrator.hpp"
#include "wickito/ito.hpp"
#include "wickito/process.hpp"
#include "wickito/serialize.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

#ifndef WICKITO_VERSION
#define WICKITO_VERSION "0.0.0"
#endif

namespace wickito::cli {

using nlohmann::json;

const char* version() { return WICKITO_VERSION; }

std::string hash_hex(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::vector<double> parse_range(const std::string& spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (item.empty() || used != item.size()) throw ParameterError("bad range '" + spec + "', want start:stop:step");
        parts.push_back(v);
    }
    if (parts.size() != 3) throw ParameterError("bad range '" + spec + "', want start:stop:step");
    const double a = parts[0], b = parts[1], h = parts[2];
    if (!(h > 0.0) || !(b >= a)) throw ParameterError("range '" + spec + "' needs step > 0 and stop >= start");
    const double steps = (b - a) / h;
    if (steps > 1e7) throw ParameterError("range '" + spec + "' has too many points");
    const auto n = static_cast<std::size_t>(std::floor(steps + 1e-9));
    std::vector<double> out(n + 1);
    for (std::size_t i = 0; i <= n; ++i) out[i] = a + h * static_cast<double>(i);
    return out;
}

namespace {

struct Common {
    std::string preset = "white";
    std::size_t modes = 200;
    std::string grid = "0:2:0.0009765625";
    std::string output = "-";
    std::string format;
};

TimeGrid parse_grid(const std::string& spec) {
    const auto pts = parse_range(spec);
    if (pts.size() < 2) throw ParameterError("grid '" + spec + "' needs at least one interval");
    return TimeGrid{pts.front(), pts.back(), pts.size() - 1};
}

ProcessModel make_model(const Common& c) {
    ProcessSettings s;
    s.modes = c.modes;
    s.grid = parse_grid(c.grid);
    return ProcessModel(parse_preset(c.preset), s);
}

json base_config(const std::string& sub, const Common& c) {
    return {{"subcommand", sub}, {"preset", c.preset}, {"modes", c.modes}, {"grid", c.grid}};
}

// Writes a result with the reproducibility header to --output.
class Emitter {
public:
    Emitter(const Common& c, std::ostream& out) : common_(c), out_(out) {}

    std::ostream& stream() {
        if (common_.output == "-" || common_.output.empty()) return out_;
        if (!file_.is_open()) {
            file_.open(common_.output, std::ios::binary);
            if (!file_) throw ParameterError("cannot open output file '" + common_.output + "'");
        }
        return file_;
    }

    void emit_json(const json& config, json result) {
        const std::string cfg = config.dump();
        json doc = {{"version", version()}, {"config_hash", hash_hex(cfg)}, {"config", config}, {"result", std::move(result)}};
        stream() << doc.dump(2) << '\n';
    }

    std::vector<std::string> csv_comments(const json& config) const {
        const std::string cfg = config.dump();
        return {"wickito " + std::string(version()) + " config_hash=" + hash_hex(cfg), "config " + cfg};
    }

    void emit_csv_header(const json& config) {
        for (const auto& line : csv_comments(config)) stream() << "# " << line << '\n';
    }

private:
    const Common& common_;
    std::ostream& out_;
    std::ofstream file_;
};

std::string want_format(const Common& c, const char* fallback, std::initializer_list<const char*> allowed) {
    const std::string f = c.format.empty() ? fallback : c.format;
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return f == a; }) == allowed.end())
        throw ParameterError("format '" + f + "' not supported here");
    return f;
}

std::string read_text(const std::string& arg) {
    if (!arg.empty() && (arg.front() == '[' || arg.front() == '{')) return arg;
    std::ifstream in(arg);
    if (!in) throw ParameterError("cannot read '" + arg + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ChaosVector parse_chaos(const std::string& arg) {
    json j;
    try {
        j = json::parse(read_text(arg));
    } catch (const json::parse_error& e) {
        throw ParameterError(std::string("bad chaos vector JSON: ") + e.what());
    }
    return j.get<ChaosVector>();
}

Integrand make_integrand(const std::string& spec, const ProcessModel& model) {
    if (spec == "one" || spec == "1") return Integrand::constant(model, 1.0);
    if (spec == "X" || spec == "x") return Integrand::process(model);
    if (spec.starts_with("frozen:")) {
        std::size_t used = 0;
        const std::string num = spec.substr(7);
        double t = 0.0;
        try {
            t = std::stod(num, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (num.empty() || used != num.size()) throw ParameterError("bad integrand '" + spec + "'");
        return Integrand::frozen_process(model, t);
    }
    throw ParameterError("unknown integrand '" + spec + "' (one, X, frozen:<t>)");
}

std::vector<std::size_t> parse_sizes(const std::string& spec) {
    std::vector<std::size_t> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (item.empty() || used != item.size() || v == 0) throw ParameterError("bad partition list '" + spec + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw ParameterError("empty partition list");
    return out;
}

void add_common(CLI::App* sub, Common& c, bool formats = true) {
    sub->add_option("--preset", c.preset, "white | quartic | fbm:H=<x>")->capture_default_str();
    sub->add_option("--modes", c.modes, "truncation K (number of Hermite modes)")->capture_default_str();
    sub->add_option("--grid", c.grid, "coefficient table grid start:stop:step")->capture_default_str();
    sub->add_option("-o,--output", c.output, "output file, - for stdout")->capture_default_str();
    if (formats) sub->add_option("--format", c.format, "json | csv");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Wick-Ito calculus for Gaussian processes with a spectral density", "wickito"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version());

    Common common;

    // simulate
    std::string sim_times;
    std::size_t sim_paths = 1;
    std::uint64_t sim_seed = 0;
    auto* sim = app.add_subcommand("simulate", "sample paths of the truncated process");
    add_common(sim, common);
    sim->add_option("--times", sim_times, "output times start:stop:step")->required();
    sim->add_option("--paths", sim_paths)->capture_default_str();
    sim->add_option("--seed", sim_seed)->capture_default_str();

    // covariance
    double cov_t = 1.0, cov_s = 1.0;
    bool cov_series = false;
    auto* cov = app.add_subcommand("covariance", "E[X(t)X(s)] by quadrature, series and closed form");
    add_common(cov, common);
    cov->add_option("--t", cov_t)->required();
    cov->add_option("--s", cov_s)->required();
    cov->add_flag("--series", cov_series, "also evaluate the chaos series at --modes");

    // wick
    std::string wick_lhs, wick_rhs;
    int wick_k = 0;
    auto* wk = app.add_subcommand("wick", "Wick product of two chaos vectors (JSON text or file)");
    wk->add_option("--lhs", wick_lhs)->required();
    wk->add_option("--rhs", wick_rhs)->required();
    wk->add_option("--k", wick_k, "index of the reported dual norms")->capture_default_str();
    wk->add_option("-o,--output", common.output)->capture_default_str();

    // integrate
    std::string int_y = "X";
    double int_a = 0.0, int_b = 1.0;
    std::size_t int_steps = 64;
    std::optional<int> int_p;
    bool int_vectors = false;
    auto* integ = app.add_subcommand("integrate", "Wick-Riemann sum against the reference integral");
    add_common(integ, common, false);
    integ->add_option("--integrand", int_y, "one | X | frozen:<t>")->capture_default_str();
    integ->add_option("--a", int_a)->capture_default_str();
    integ->add_option("--b", int_b)->capture_default_str();
    integ->add_option("--steps", int_steps)->capture_default_str();
    integ->add_option("--p", int_p, "dual index (default N + 5)");
    integ->add_flag("--vectors", int_vectors, "include chaos coefficients");

    // ito-check
    std::string ito_f = "x2";
    std::string ito_regime = "exact";
    std::string ito_variance = "quadrature";
    ItoOptions ito_opts;
    std::size_t ito_paths = 10000;
    std::uint64_t ito_seed = 0;
    double ito_alpha = 1.0;
    bool ito_vectors = false;
    auto* ito = app.add_subcommand("ito-check", "both sides of the Ito formula");
    add_common(ito, common, false);
    ito->add_option("--f", ito_f, "x | x2 | x^3 | x4 | cos[:a] | sin[:a]")->capture_default_str();
    ito->add_option("--regime", ito_regime, "exact | wick-exp | mc")->capture_default_str();
    ito->add_option("--t", ito_opts.t)->capture_default_str();
    ito->add_option("--t0", ito_opts.t0, "start time (default 0, 0.01 if r' is singular at 0)");
    ito->add_option("--steps", ito_opts.n_steps)->capture_default_str();
    ito->add_option("--exact-modes", ito_opts.modes, "modes kept by the exact regimes (0 = auto)")->capture_default_str();
    ito->add_option("--max-order", ito_opts.max_order)->capture_default_str();
    ito->add_option("--p", ito_opts.p, "dual index of the residual (default N + 4)");
    ito->add_option("--variance", ito_variance, "quadrature | series")->capture_default_str();
    ito->add_option("--tolerance", ito_opts.tolerance)->capture_default_str();
    ito->add_option("--alpha", ito_alpha, "frequency for --regime wick-exp")->capture_default_str();
    ito->add_option("--paths", ito_paths)->capture_default_str();
    ito->add_option("--seed", ito_seed)->capture_default_str();
    ito->add_flag("--vectors", ito_vectors, "include chaos coefficients");

    // convergence
    std::string conv_y = "X";
    double conv_a = 0.0, conv_b = 1.0;
    std::string conv_n = "8,16,32,64,128,256,512,1024";
    std::optional<int> conv_p;
    auto* conv = app.add_subcommand("convergence", "Wick-Riemann error against partition size");
    add_common(conv, common);
    conv->add_option("--integrand", conv_y, "one | X | frozen:<t>")->capture_default_str();
    conv->add_option("--a", conv_a)->capture_default_str();
    conv->add_option("--b", conv_b)->capture_default_str();
    conv->add_option("--n", conv_n, "comma separated partition sizes")->capture_default_str();
    conv->add_option("--p", conv_p, "dual index (default N + 5)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << version() << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitParameter;
    }

    Emitter emit(common, out);
    try {
        if (*sim) {
            const auto fmt = want_format(common, "csv", {"csv", "json"});
            const auto model = make_model(common);
            const auto times = parse_range(sim_times);
            json config = base_config("simulate", common);
            config["times"] = sim_times;
            config["paths"] = sim_paths;
            config["seed"] = sim_seed;
            const auto ps = sample_paths(model, times, sim_paths, sim_seed);
            if (fmt == "csv") {
                const auto comments = emit.csv_comments(config);
                write_paths_csv(emit.stream(), ps, comments);
            } else {
                json paths = json::array();
                for (std::size_t j = 0; j < ps.paths; ++j) {
                    json col = json::array();
                    for (std::size_t i = 0; i < ps.times.size(); ++i) col.push_back(ps.values[i * ps.paths + j]);
                    paths.push_back(std::move(col));
                }
                emit.emit_json(config, {{"times", ps.times}, {"paths", paths}});
            }
        } else if (*cov) {
            const auto fmt = want_format(common, "json", {"json", "csv"});
            const auto density = parse_preset(common.preset);
            json config = base_config("covariance", common);
            config["t"] = cov_t;
            config["s"] = cov_s;
            config["series"] = cov_series;
            json res = {{"quadrature", covariance_quadrature(cov_t, cov_s, density)},
                        {"levy_khintchine_r_t", levy_khintchine_r(cov_t, density)}};
            if (const auto h = density.hurst()) {
                res["V_H"] = hurst_constant(*h);
                res["closed_form_printed"] = closed_form::fbm_covariance_printed(*h, cov_t, cov_s);
                res["closed_form_half"] = 0.5 * closed_form::fbm_covariance_printed(*h, cov_t, cov_s);
            } else if (common.preset == "quartic") {
                res["r_quadrature_t"] = r_of_t(cov_t, density);
                res["r_closed_form_t"] = closed_form::quartic_variance(cov_t);
                res["r_printed_t"] = closed_form::quartic_r_printed(cov_t);
            }
            if (cov_series) {
                const auto model = make_model(common);
                const auto est = series_covariance_estimate(model, cov_t, cov_s);
                res["series"] = est.raw;
                res["series_extrapolated"] = est.extrapolated;
            }
            if (fmt == "json") {
                emit.emit_json(config, res);
            } else {
                emit.emit_csv_header(config);
                auto& os = emit.stream();
                os << "quantity,value\n" << std::setprecision(17);
                for (const auto& [k, v] : res.items()) os << k << ',' << v.get<double>() << '\n';
            }
        } else if (*wk) {
            const auto a = parse_chaos(wick_lhs);
            const auto b = parse_chaos(wick_rhs);
            const auto prod = wick(a, b);
            json config = {{"subcommand", "wick"}, {"lhs", a}, {"rhs", b}, {"k", wick_k}};
            emit.emit_json(config, {{"product", prod},
                                    {"dual_norm_lhs", dual_norm_k(a, wick_k)},
                                    {"dual_norm_rhs", dual_norm_k(b, wick_k)},
                                    {"dual_norm_product", dual_norm_k(prod, wick_k)}});
        } else if (*integ) {
            const auto model = make_model(common);
            const auto y = make_integrand(int_y, model);
            const int p = int_p.value_or(model.N() + 5);
            json config = base_config("integrate", common);
            config["integrand"] = int_y;
            config["a"] = int_a;
            config["b"] = int_b;
            config["steps"] = int_steps;
            config["p"] = p;
            const auto part = uniform_partition(int_a, int_b, int_steps);
            const auto rs = riemann_sum(y, model, part);
            const auto ref = reference_integral_dense(y, model, int_a, int_b);
            const auto ref_vec = to_sparse(y.basis(), ref.value);
            json res = {{"integrand", y.label()},
                        {"error", dual_norm_k(rs - ref_vec, p)},
                        {"reference_error_estimate", ref.error_estimate},
                        {"riemann_dual_norm", dual_norm_k(rs, p)},
                        {"reference_dual_norm", dual_norm_k(ref_vec, p)}};
            if (int_vectors) {
                res["riemann"] = rs;
                res["reference"] = ref_vec;
            }
            emit.emit_json(config, res);
        } else if (*ito) {
            const auto model = make_model(common);
            if (ito_variance == "quadrature") ito_opts.variance = VarianceSource::quadrature;
            else if (ito_variance == "series") ito_opts.variance = VarianceSource::series;
            else throw ParameterError("unknown variance source '" + ito_variance + "'");
            json config = base_config("ito-check", common);
            config["f"] = ito_f;
            config["regime"] = ito_regime;
            config["t"] = ito_opts.t;
            config["t0"] = ito_opts.t0 ? json(*ito_opts.t0) : json(nullptr);
            config["steps"] = ito_opts.n_steps;
            json res;
            if (ito_regime == "exact") {
                const auto f = parse_function(ito_f);
                if (f.degree && *f.degree > 4) throw ParameterError("polynomial degree above 4 is not supported");
                config["exact_modes"] = ito_opts.modes;
                config["max_order"] = ito_opts.max_order;
                config["variance"] = ito_variance;
                config["p"] = ito_opts.p ? json(*ito_opts.p) : json(nullptr);
                res = report_json(ito_gaussian(model, f, ito_opts), ito_vectors);
            } else if (ito_regime == "wick-exp") {
                config.erase("f");
                config["alpha"] = ito_alpha;
                config["exact_modes"] = ito_opts.modes;
                config["max_order"] = ito_opts.max_order;
                config["variance"] = ito_variance;
                config["tolerance"] = ito_opts.tolerance;
                config["p"] = ito_opts.p ? json(*ito_opts.p) : json(nullptr);
                res = report_json(ito_exponential(model, ito_alpha, ito_opts), ito_vectors);
            } else if (ito_regime == "mc") {
                const auto f = parse_function(ito_f);
                config["paths"] = ito_paths;
                config["seed"] = ito_seed;
                const double t0 = ito_opts.t0.value_or(default_t0(model.density()));
                res = report_json(ito_pathwise(model, f.fn, t0, ito_opts.t, ito_opts.n_steps, ito_paths, ito_seed));
            } else {
                throw ParameterError("unknown regime '" + ito_regime + "' (exact, wick-exp, mc)");
            }
            emit.emit_json(config, res);
        } else if (*conv) {
            const auto fmt = want_format(common, "json", {"json", "csv"});
            const auto model = make_model(common);
            const auto y = make_integrand(conv_y, model);
            const auto ns = parse_sizes(conv_n);
            const int p = conv_p.value_or(model.N() + 5);
            json config = base_config("convergence", common);
            config["integrand"] = conv_y;
            config["a"] = conv_a;
            config["b"] = conv_b;
            config["n"] = conv_n;
            config["p"] = p;
            const auto rep = convergence_study(y, model, conv_a, conv_b, ns, p);
            if (fmt == "json") {
                emit.emit_json(config, report_json(rep));
            } else {
                emit.emit_csv_header(config);
                write_csv(emit.stream(), rep);
            }
        }
    } catch (const AccuracyError& e) {
        err << "accuracy error: " << e.what() << '\n';
        return kExitAccuracy;
    } catch (const ParameterError& e) {
        err << "parameter error: " << e.what() << '\n';
        return kExitParameter;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace wickito::cli
