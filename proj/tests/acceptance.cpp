// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only
// Exit status is 0 iff every selected criterion passes.

#include "cli.hpp"
#include "support.hpp"
#include "wickito/chaos.hpp"
#include "wickito/integrator.hpp"
#include "wickito/ito.hpp"
#include "wickito/process.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

using namespace wickito;

namespace {

// Pinned tolerances.
constexpr double kWickTol = 1e-12;
constexpr double kWickSeconds = 5.0;
constexpr double kVageA2Tol = 1e-6;
constexpr double kVageSeconds = 10.0;
constexpr double kBmVarTol = 1e-3;
constexpr double kBmCovTol = 1e-3;
constexpr double kBmSeconds = 60.0;
constexpr double kFbmQuadRelTol = 1e-4;
constexpr double kFbmSeriesRelTol = 0.05;
constexpr double kSlopeMax = -0.9;
constexpr double kTelescopeZero = 1e-13;  // "exactly zero" up to rounding
constexpr double kItoResidualTol = 1e-6;
constexpr double kFalsificationTol = 1e-4;
constexpr double kMcSigmas = 3.0;
constexpr double kRatioLo = 0.4;
constexpr double kRatioHi = 0.6;
constexpr double kQuarticFdTol = 1e-5;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

const ProcessModel& model(const std::string& preset, std::size_t modes) {
    static std::map<std::pair<std::string, std::size_t>, std::unique_ptr<ProcessModel>> memo;
    auto& slot = memo[{preset, modes}];
    if (!slot) slot = std::make_unique<ProcessModel>(parse_preset(preset), with_modes(modes));
    return *slot;
}

// ---------------------------------------------------------------------------

ChaosVector random_vector(std::mt19937_64& rng, const std::vector<MultiIndex>& pool) {
    std::uniform_int_distribution<std::size_t> count(1, 20), pick(0, pool.size() - 1);
    std::normal_distribution<double> normal;
    std::vector<ChaosVector::Term> terms;
    const std::size_t n = count(rng);
    for (std::size_t i = 0; i < n; ++i) terms.push_back({pool[pick(rng)], normal(rng)});
    return ChaosVector(std::move(terms));
}

Outcome c1_wick_oracle() {
    const auto t0 = Clock::now();
    const auto small = enumerate(4, 4);
    const auto big = enumerate(8, 4);
    std::unordered_map<MultiIndex, std::size_t, MultiIndexHash> pos;
    for (std::size_t i = 0; i < big.size(); ++i) pos.emplace(big[i], i);
    std::unordered_map<MultiIndex, std::size_t, MultiIndexHash> pos_small;
    for (std::size_t i = 0; i < small.size(); ++i) pos_small.emplace(small[i], i);

    std::mt19937_64 rng(20240611);
    double worst = 0.0;
    std::vector<double> fa(small.size()), ga(small.size()), dense(big.size());
    for (int trial = 0; trial < 500; ++trial) {
        const auto f = random_vector(rng, small);
        const auto g = random_vector(rng, small);
        std::fill(fa.begin(), fa.end(), 0.0);
        std::fill(ga.begin(), ga.end(), 0.0);
        for (const auto& t : f.terms()) fa[pos_small.at(t.alpha)] = t.coeff;
        for (const auto& t : g.terms()) ga[pos_small.at(t.alpha)] = t.coeff;
        // dense convolution over all index pairs
        std::fill(dense.begin(), dense.end(), 0.0);
        for (std::size_t i = 0; i < small.size(); ++i)
            for (std::size_t j = 0; j < small.size(); ++j)
                dense[pos.at(small[i] + small[j])] += fa[i] * ga[j];
        const auto p = wick(f, g);
        std::vector<double> sparse(big.size(), 0.0);
        for (const auto& t : p.terms()) sparse[pos.at(t.alpha)] = t.coeff;
        for (std::size_t i = 0; i < big.size(); ++i) worst = std::max(worst, std::abs(sparse[i] - dense[i]));
    }
    const double secs = seconds_since(t0);
    return {worst <= kWickTol && secs < kWickSeconds,
            fmt("500 pairs, max |sparse - dense| = %.3g (tol %.0e), %.2f s (limit %.0f s)", worst, kWickTol, secs,
                kWickSeconds)};
}

Outcome c2_vage() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(77);
    const auto pool = enumerate(4, 5);
    std::uniform_int_distribution<int> kd(2, 10);
    int violations = 0;
    double worst_ratio = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int k = kd(rng);
        const int l = std::uniform_int_distribution<int>(0, k - 2)(rng);
        const auto h = random_vector(rng, pool);
        const auto u = random_vector(rng, pool);
        const double lhs = dual_norm_k(wick(h, u), k);
        const double rhs = vage_constant(k, l) * dual_norm_k(h, l) * dual_norm_k(u, k);
        worst_ratio = std::max(worst_ratio, lhs / rhs);
        if (lhs > rhs * (1.0 + 1e-12)) ++violations;
    }
    // truncated product for A(2)
    double log_prod = 0.0;
    for (int j = 1; j <= 1'000'000; ++j) log_prod += -0.5 * std::log1p(-1.0 / (4.0 * j * j));
    const double a2_trunc = std::exp(log_prod);
    const double a2_exact = std::sqrt(std::numbers::pi / 2.0);
    const double secs = seconds_since(t0);
    const bool pass = violations == 0 && std::abs(a2_trunc - a2_exact) <= kVageA2Tol && secs < kVageSeconds;
    return {pass, fmt("violations %d/1000 (max ratio %.4f); A(2) truncated product %.9f vs sqrt(pi/2) %.9f "
                      "(|diff| %.2e, tol %.0e); vage_constant(2,0) = %.12f; %.2f s",
                      violations, worst_ratio, a2_trunc, a2_exact, std::abs(a2_trunc - a2_exact), kVageA2Tol,
                      vage_constant(2, 0), secs)};
}

Outcome c3_bm_anchor() {
    const auto t0 = Clock::now();
    const auto& m = model("white", 400);
    const auto est = series_covariance_estimate(m, 1.0, 1.0);
    double worst = 0.0;
    for (double t : {0.0, 0.5, 1.0, 1.5, 2.0})
        for (double s : {0.0, 0.5, 1.0, 1.5, 2.0}) worst = std::max(worst, std::abs(covariance(m, t, s) - std::min(t, s)));
    const double secs = seconds_since(t0);
    const double var_err = std::abs(est.extrapolated - 1.0);
    return {var_err <= kBmVarTol && worst <= kBmCovTol && secs < kBmSeconds,
            fmt("Var X(1) from chaos coefficients at K=400: %.6f (raw partial sum %.6f), |err| %.2e (tol %.0e); "
                "5x5 grid max |cov - min| %.2e (tol %.0e); %.1f s",
                est.extrapolated, est.raw, var_err, kBmVarTol, worst, kBmCovTol, secs)};
}

Outcome c4_fbm_covariance() {
    const double pts[] = {0.5, 1.0, 2.0};
    bool quad_ok = true, series_ok = true, monotone_ok = true;
    std::ostringstream os;
    double corrected_quad = 0.0;
    for (double H : {0.3, 0.7}) {
        const std::string preset = fmt("fbm:H=%g", H);
        const auto& m200 = model(preset, 200);
        double worst_quad = 0.0, worst_series = 0.0, worst_series_corr = 0.0;
        bool monotone = true;
        for (double t : pts)
            for (double s : pts) {
                const double printed = closed_form::fbm_covariance_printed(H, t, s);
                const double q = covariance(m200, t, s);
                worst_quad = std::max(worst_quad, std::abs(q - printed) / std::abs(printed));
                corrected_quad = std::max(corrected_quad, std::abs(q - 0.5 * printed) / std::abs(0.5 * printed));
                double prev = INFINITY;
                for (std::size_t K : {50, 100, 200}) {
                    const double e = std::abs(series_covariance(m200, t, s, K) - printed) / std::abs(printed);
                    if (e > prev) monotone = false;
                    prev = e;
                }
                const double sK = series_covariance(m200, t, s);
                worst_series = std::max(worst_series, std::abs(sK - printed) / std::abs(printed));
                worst_series_corr =
                    std::max(worst_series_corr, std::abs(sK - 0.5 * printed) / std::abs(0.5 * printed));
            }
        quad_ok = quad_ok && worst_quad <= kFbmQuadRelTol;
        series_ok = series_ok && worst_series <= kFbmSeriesRelTol;
        monotone_ok = monotone_ok && monotone;
        os << fmt("H=%.1f: quadrature vs V_H(...) max rel %.4f; series K=200 max rel %.4f, monotone %s; "
                  "[against V_H(...)/2: series max rel %.4f]. ",
                  H, worst_quad, worst_series, monotone ? "yes" : "no", worst_series_corr);
    }
    os << fmt("[quadrature against V_H(...)/2: max rel %.2e]", corrected_quad);
    return {quad_ok && series_ok && monotone_ok,
            fmt("tol quad %.0e rel, series %.0f%%. ", kFbmQuadRelTol, 100 * kFbmSeriesRelTol) + os.str()};
}

Outcome c5_riemann_convergence() {
    const std::vector<std::size_t> ns = {8, 16, 32, 64, 128, 256, 512, 1024};
    bool pass = true;
    std::ostringstream os;
    for (const char* preset : {"white", "fbm:H=0.7"}) {
        const auto& m = model(preset, 200);
        const int p = m.N() + 5;
        const auto rx = convergence_study(Integrand::process(m), m, 0.0, 1.0, ns, p);
        const auto r1 = convergence_study(Integrand::constant(m), m, 0.0, 1.0, ns, p);
        const double one_max = *std::max_element(r1.errors.begin(), r1.errors.end());
        const bool ok = rx.slope && *rx.slope <= kSlopeMax && one_max <= kTelescopeZero;
        pass = pass && ok;
        os << fmt("%s p=%d: Y=X slope %.4f (need <= %.1f), errors %.3e..%.3e; Y=1 max error %.2e (zero to %.0e). ",
                  preset, p, rx.slope.value_or(NAN), kSlopeMax, rx.errors.front(), rx.errors.back(), one_max,
                  kTelescopeZero);
    }
    return {pass, os.str()};
}

Outcome c6_ito_exact() {
    const auto t0 = Clock::now();
    const auto& m = model("white", 400);
    ItoOptions o;
    o.n_steps = 2048;
    const auto r = ito_polynomial(m, 2, o);
    const double expected = r_of_t(1.0, m.density()) - r_of_t(0.0, m.density());
    const double fals_err = std::abs(r.residual_without_correction - expected);
    return {r.residual <= kItoResidualTol && fals_err <= kFalsificationTol,
            fmt("f=x^2, white, K=%zu, n=2048, p=%d: residual %.3e (tol %.0e); without correction %.8f vs r(1)-r(0) = "
                "%.8f (|diff| %.2e, tol %.0e); Riemann-sum variant residual %.3e; %.1f s",
                r.modes, r.p, r.residual, kItoResidualTol, r.residual_without_correction, expected, fals_err,
                kFalsificationTol, r.riemann_residual, seconds_since(t0))};
}

Outcome c7_ito_mc() {
    const auto t0 = Clock::now();
    const auto& m = model("fbm:H=0.6", 200);
    const double ta = 0.01, tb = 1.0;
    const auto mc = ito_pathwise(m, GaussianFunction::cosine(1.0).fn, ta, tb, 1024, 10000, 2024);
    ItoOptions o;
    o.t0 = ta;
    o.t = tb;
    o.n_steps = 128;
    o.variance = VarianceSource::series;
    const auto ex = ito_exponential(m, 1.0, o);
    const double exact_dlhs = ex.cos_part.lhs.constant_term() - ex.cos_part.initial.constant_term();
    const double exact_corr = ex.cos_part.correction.constant_term();
    const double z_res = std::abs(mc.mc_residual.mean) / mc.mc_residual.std_error;
    const double z_lhs = std::abs(mc.mc_lhs.mean - exact_dlhs) / mc.mc_lhs.std_error;
    const double z_corr = std::abs(mc.mc_correction.mean - exact_corr) / mc.mc_correction.std_error;
    const bool pass = z_res <= kMcSigmas && z_lhs <= kMcSigmas && z_corr <= kMcSigmas;
    return {pass, fmt("cos, fbm(0.6), [%.2f, %.0f], 10^4 paths, 1024 steps: mean residual %.3e +- %.2e (%.2f SE); "
                      "E[f(X(t)) - f(X(t0))] MC %.6f +- %.6f vs wick-exp %.6f (%.2f sigma); correction MC %.6f +- %.6f "
                      "vs wick-exp %.6f (%.2f sigma); wick-exp chaos residual %.2e; limit %.0f sigma; %.1f s",
                      ta, tb, mc.mc_residual.mean, mc.mc_residual.std_error, z_res, mc.mc_lhs.mean,
                      mc.mc_lhs.std_error, exact_dlhs, z_lhs, mc.mc_correction.mean, mc.mc_correction.std_error,
                      exact_corr, z_corr, ex.residual, kMcSigmas, seconds_since(t0))};
}

Outcome c8_regularity() {
    bool pass = true;
    std::ostringstream os;
    for (const char* preset : {"white", "quartic"}) {
        const auto& m = model(preset, 200);
        double h = 0.1;
        double prev = derivative_check(m, 0.5, h);
        os << preset << ": ratios";
        for (int i = 0; i < 4; ++i) {
            h /= 2;
            const double e = derivative_check(m, 0.5, h);
            const double ratio = e / prev;
            pass = pass && ratio >= kRatioLo && ratio <= kRatioHi;
            os << fmt(" %.4f", ratio);
            prev = e;
        }
        const auto fit = fit_lipschitz(m, 50);
        os << fmt(" (error(0.1) %.3e; Lipschitz bounds x h: series C_N %.3e, norm C_N %.3e). ",
                  derivative_check(m, 0.5, 0.1), fit.series_CN * 0.1, fit.norm_CN * 0.1);
    }
    return {pass, fmt("need ratio in [%.1f, %.1f]. ", kRatioLo, kRatioHi) + os.str()};
}

Outcome c9_quartic() {
    const auto q = presets::quartic();
    const double h = 1e-3;
    double worst_fd = 0.0, worst_printed = 0.0, worst_derived = 0.0;
    for (double t : {0.25, 0.5, 1.0, 1.5, 2.0}) {
        const double fd = (r_of_t(t + h, q) - r_of_t(t - h, q)) / (2 * h);
        worst_fd = std::max(worst_fd, std::abs(fd - r_prime(t, q)));
        const double r = r_of_t(t, q);
        worst_printed = std::max(worst_printed, std::abs(0.5 * r - closed_form::quartic_r_printed(t)));
        worst_derived = std::max(worst_derived, std::abs(r - closed_form::quartic_variance(t)));
    }
    return {worst_fd <= kQuarticFdTol,
            fmt("max |FD r' - quadrature r'| %.2e (tol %.0e). Printed closed form: MISMATCH, max |r_LK - printed| "
                "%.3e (printed r(1) = %.6f < 0, quadrature r_LK(1) = %.6f); derived (sqrt(2pi)/4)(1-(1-t^2/4)e^{-t^2/8}) "
                "matches Var X(t) to %.1e",
                worst_fd, kQuarticFdTol, worst_printed, closed_form::quartic_r_printed(1.0), 0.5 * r_of_t(1.0, q),
                worst_derived)};
}

Outcome c10_determinism() {
    const auto dir = std::filesystem::temp_directory_path() / "wickito-acceptance";
    std::filesystem::create_directories(dir);
    const std::vector<std::vector<std::string>> runs = {
        {"simulate", "--preset", "fbm:H=0.7", "--modes", "60", "--paths", "5", "--seed", "42", "--times", "0:1:0.01"},
        {"covariance", "--preset", "fbm:H=0.3", "--modes", "60", "--t", "1", "--s", "0.5", "--series"},
        {"wick", "--lhs", R"([{"alpha":"1,2","coeff":0.5},{"alpha":"0","coeff":1}])", "--rhs",
         R"([{"alpha":"0,1","coeff":-2}])", "--k", "2"},
        {"integrate", "--preset", "white", "--modes", "30", "--integrand", "X", "--steps", "32"},
        {"ito-check", "--preset", "white", "--modes", "30", "--f", "x2", "--steps", "64"},
        {"ito-check", "--preset", "fbm:H=0.6", "--modes", "30", "--regime", "mc", "--f", "cos", "--paths", "500",
         "--steps", "64", "--seed", "7"},
        {"convergence", "--preset", "white", "--modes", "30", "--n", "8,16,32", "--format", "csv"},
    };
    int identical = 0;
    std::ostringstream os;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        std::string bytes[2];
        for (int rep = 0; rep < 2; ++rep) {
            auto args = runs[i];
            const auto path = dir / fmt("run%zu_%d.out", i, rep);
            args.push_back("--output");
            args.push_back(path.string());
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            std::ifstream in(path, std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            bytes[rep] = fmt("exit %d\n", code) + ss.str();
        }
        const bool same = bytes[0] == bytes[1] && bytes[0].size() > 10;
        identical += same;
        os << runs[i][0] << (same ? " ok" : " DIFFERS") << "; ";
    }
    std::filesystem::remove_all(dir);
    return {identical == static_cast<int>(runs.size()),
            fmt("%d/%zu subcommand runs byte-identical: ", identical, runs.size()) + os.str()};
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all = {
        {"wick-algebra oracle equivalence", c1_wick_oracle},
        {"Vage inequality", c2_vage},
        {"Brownian calibration anchor", c3_bm_anchor},
        {"fBm covariance", c4_fbm_covariance},
        {"Riemann-sum convergence", c5_riemann_convergence},
        {"Ito formula, exact regime", c6_ito_exact},
        {"Ito formula, Monte Carlo regime", c7_ito_mc},
        {"regularity of W", c8_regularity},
        {"quartic variance function", c9_quartic},
        {"CLI determinism", c10_determinism},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) selected.push_back(std::atoi(argv[++i]));
        else {
            std::fprintf(stderr, "usage: acceptance [--criterion N]...\n");
            return 2;
        }
    }
    if (selected.empty())
        for (int i = 1; i <= static_cast<int>(all.size()); ++i) selected.push_back(i);

    bool ok = true;
    for (int id : selected) {
        if (id < 1 || id > static_cast<int>(all.size())) {
            std::fprintf(stderr, "no criterion %d\n", id);
            return 2;
        }
        Outcome o;
        try {
            o = all[id - 1].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] C%d %s: %s\n", o.pass ? "PASS" : "FAIL", id, all[id - 1].name, o.detail.c_str());
        std::fflush(stdout);
        ok = ok && o.pass;
    }
    return ok ? 0 : 1;
}
