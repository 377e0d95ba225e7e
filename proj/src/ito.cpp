#include "wickito/ito.hpp"

#include "wickito/basis.hpp"
#include "wickito/errors.hpp"
#include "wickito/integrator.hpp"
#include "wickito/kernels.hpp"
#include "wickito/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace wickito {

namespace {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

// E[Z^m] for Z ~ N(0, v).
double gaussian_power_moment(unsigned m, double v) {
    if (m % 2 == 1) return 0.0;
    double r = 1.0;
    for (unsigned j = m - 1; j >= 1 && j < m; j -= 2) r *= j;  // (m-1)!!
    return r * std::pow(v, m / 2.0);
}

double falling(unsigned d, unsigned j) {
    double r = 1.0;
    for (unsigned i = 0; i < j; ++i) r *= d - i;
    return r;
}

// ||x||'_p restricted to each chaos order.
std::vector<double> norm_by_order(const ChaosVector& x, double p, std::size_t max_order) {
    std::vector<double> s(max_order + 1, 0.0);
    for (const auto& t : x.terms()) {
        const auto q = static_cast<std::size_t>(t.alpha.order());
        if (q < s.size()) s[q] += t.coeff * t.coeff * std::exp(-log_weight(t.alpha, p) * 1.0);
    }
    for (double& v : s) v = std::sqrt(v);
    return s;
}

void finish_residuals(ItoReport& r, const ChaosVector& riemann_wick) {
    const ChaosVector base = r.lhs - r.initial;
    const ChaosVector res = base - r.wick_integral - r.correction;
    r.residual = dual_norm_k(res, r.p);
    r.residual_without_correction = dual_norm_k(base - r.wick_integral, r.p);
    r.riemann_residual = dual_norm_k(base - riemann_wick - r.correction, r.p);
    r.residual_by_order = norm_by_order(res, r.p, r.max_order);
}

// sqrt(sum_{n > D} a_n^2 A^n / n!) with A = sum_k c_k^2 (2k)^{-p}: bound on
// ||sum_{|beta| > D} a_|beta| c^beta / beta! H_beta||'_p.
double omitted_order_bound(const GaussianFunction& f, std::span<const double> c, double variance, int p,
                           std::size_t D) {
    if (f.degree && *f.degree <= D) return 0.0;
    double A = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) A += c[k] * c[k] * std::pow(2.0 * static_cast<double>(k + 1), -p);
    if (A == 0.0) return 0.0;
    double sum = 0.0;
    double log_term_base = 0.0;  // log(A^n / n!)
    for (std::size_t n = 1; n <= D + 400; ++n) {
        log_term_base += std::log(A) - std::log(static_cast<double>(n));
        if (n <= D) continue;
        const double a = f.moment(static_cast<unsigned>(n), variance);
        const double term = a * a * std::exp(log_term_base);
        sum += term;
        if (term < 1e-40 && n > D + 10) break;
    }
    return std::sqrt(sum);
}

struct VarianceFns {
    std::function<double(double)> v;
    std::function<double(double)> dv;
};

VarianceFns variance_fns(const ProcessModel& model, VarianceSource src) {
    if (src == VarianceSource::quadrature) {
        const auto* m = &model.density();
        return {[m](double s) { return r_of_t(s, *m); }, [m](double s) { return r_prime(s, *m); }};
    }
    const auto* pm = &model;
    return {[pm](double s) {
                const auto c = pm->c(s);
                double r = 0.0;
                for (double x : c) r += x * x;
                return r;
            },
            [pm](double s) {
                const auto c = pm->c(s);
                const auto w = pm->w(s);
                double r = 0.0;
                for (std::size_t k = 0; k < c.size(); ++k) r += 2.0 * c[k] * w[k];
                return r;
            }};
}

std::size_t auto_modes(const ProcessModel& model, std::size_t D) {
    std::size_t k = model.modes();
    while (k > 1 && count_indices(D, k) > kExactBasisCap) --k;
    return k;
}

}  // namespace

// ---------------------------------------------------------------------------

GaussianFunction GaussianFunction::monomial(unsigned d) {
    GaussianFunction g;
    const double dd = d;
    g.fn.descriptor = d == 1 ? "x" : "x^" + std::to_string(d);
    g.fn.f = [d](double x) { return std::pow(x, d); };
    g.fn.df = [d, dd](double x) { return d >= 1 ? dd * std::pow(x, d - 1) : 0.0; };
    g.fn.d2f = [d, dd](double x) { return d >= 2 ? dd * (dd - 1) * std::pow(x, d - 2) : 0.0; };
    g.moment = [d](unsigned j, double v) { return j > d ? 0.0 : falling(d, j) * gaussian_power_moment(d - j, v); };
    g.degree = d;
    return g;
}

GaussianFunction GaussianFunction::cosine(double alpha) {
    GaussianFunction g;
    g.fn.descriptor = alpha == 1.0 ? "cos" : "cos:" + format_double(alpha);
    g.fn.f = [alpha](double x) { return std::cos(alpha * x); };
    g.fn.df = [alpha](double x) { return -alpha * std::sin(alpha * x); };
    g.fn.d2f = [alpha](double x) { return -alpha * alpha * std::cos(alpha * x); };
    // f^(j) = alpha^j cos(alpha x + j pi/2), E cos(alpha Z + phi) = e^{-alpha^2 v/2} cos(phi)
    g.moment = [alpha](unsigned j, double v) {
        static constexpr double phase[4] = {1.0, 0.0, -1.0, 0.0};
        return phase[j % 4] * std::pow(alpha, j) * std::exp(-0.5 * alpha * alpha * v);
    };
    return g;
}

GaussianFunction GaussianFunction::sine(double alpha) {
    GaussianFunction g;
    g.fn.descriptor = alpha == 1.0 ? "sin" : "sin:" + format_double(alpha);
    g.fn.f = [alpha](double x) { return std::sin(alpha * x); };
    g.fn.df = [alpha](double x) { return alpha * std::cos(alpha * x); };
    g.fn.d2f = [alpha](double x) { return -alpha * alpha * std::sin(alpha * x); };
    g.moment = [alpha](unsigned j, double v) {
        static constexpr double phase[4] = {0.0, 1.0, 0.0, -1.0};
        return phase[j % 4] * std::pow(alpha, j) * std::exp(-0.5 * alpha * alpha * v);
    };
    return g;
}

GaussianFunction parse_function(const std::string& spec) {
    auto number = [&](std::string_view s) {
        double v = 0.0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || r.ec != std::errc{} || r.ptr != s.data() + s.size())
            throw ParameterError("bad function spec '" + spec + "'");
        return v;
    };
    const std::string_view s(spec);
    if (s == "x") return GaussianFunction::monomial(1);
    if (s.starts_with("x")) {
        std::string_view rest = s.substr(1);
        if (rest.starts_with("^")) rest.remove_prefix(1);
        const double d = number(rest);
        if (d < 1 || d != std::floor(d)) throw ParameterError("bad monomial degree in '" + spec + "'");
        return GaussianFunction::monomial(static_cast<unsigned>(d));
    }
    if (s == "cos") return GaussianFunction::cosine(1.0);
    if (s == "sin") return GaussianFunction::sine(1.0);
    if (s.starts_with("cos:")) return GaussianFunction::cosine(number(s.substr(4)));
    if (s.starts_with("sin:")) return GaussianFunction::sine(number(s.substr(4)));
    throw ParameterError("unknown function '" + spec + "' (x, x2, x^3, cos, cos:<a>, sin:<a>)");
}

const char* to_string(Regime r) {
    switch (r) {
        case Regime::exact: return "exact";
        case Regime::wick_exp: return "wick-exp";
        case Regime::monte_carlo: return "monte-carlo";
    }
    return "?";
}

const char* to_string(VarianceSource v) { return v == VarianceSource::quadrature ? "quadrature" : "series"; }

double default_t0(const SpectralDensity& m) { return m.singular_derivative_at_zero() ? 0.01 : 0.0; }

// ---------------------------------------------------------------------------

ItoReport ito_gaussian(const ProcessModel& model, const GaussianFunction& f, const ItoOptions& opts) {
    const std::size_t D = f.degree ? std::max<std::size_t>(*f.degree, 1) : opts.max_order;
    if (D == 0) throw ParameterError("ito: chaos order cap must be positive");
    const double t0 = opts.t0.value_or(default_t0(model.density()));
    const double t = opts.t;
    if (!(t > t0)) throw ParameterError("ito: need t > t0");
    if (opts.n_steps == 0 || opts.gauss_order == 0) throw ParameterError("ito: need n_steps >= 1");
    if (model.density().singular_derivative_at_zero() && t0 < 1e-6)
        throw DomainError("ito: r' is singular at 0 for " + model.density().descriptor() + "; start at t0 > 0");
    const std::size_t Ke = opts.modes ? std::min(opts.modes, model.modes()) : auto_modes(model, D);
    const auto basis = shared_basis(D, Ke);
    const std::size_t B = basis->size();

    ItoReport rep;
    rep.f_descriptor = f.fn.descriptor;
    rep.density = model.density().descriptor();
    rep.regime = Regime::exact;
    rep.variance = opts.variance;
    rep.t0 = t0;
    rep.t = t;
    rep.p = opts.p.value_or(model.N() + 4);
    rep.n_steps = opts.n_steps;
    rep.modes = Ke;
    rep.max_order = D;

    const auto var = variance_fns(model, opts.variance);
    std::vector<double> cfull(model.modes());
    std::vector<double> a(D + 1);
    // out = sum_{|beta| <= D - shift} E[f^(|beta| + shift)(X(s))] c(s)^beta / beta!
    auto functional = [&](double s, unsigned shift, std::span<double> out) {
        model.c_at(s, cfull);
        const double v = var.v(s);
        a.assign(D + 1 - shift, 0.0);
        for (std::size_t q = 0; q < a.size(); ++q) a[q] = f.moment(static_cast<unsigned>(q + shift), v);
        kernels::omp::gaussian_functional(*basis, std::span<const double>(cfull).first(Ke), a, out);
    };

    std::vector<double> lhs(B), init(B);
    functional(t, 0, lhs);
    functional(t0, 0, init);

    std::vector<double> y(B);
    std::vector<double> wfull(model.modes());
    const auto wick = gauss_integral(
        [&](double s, std::span<double> out) {
            functional(s, 1, y);
            model.w_at(s, wfull);
            kernels::omp::wick_first_order(*basis, y, std::span<const double>(wfull).first(Ke), 1.0, out);
        },
        B, t0, t, opts.n_steps, opts.gauss_order);
    const auto corr = gauss_integral(
        [&](double s, std::span<double> out) {
            functional(s, 2, out);
            const double g = 0.5 * var.dv(s);
            for (double& x : out) x *= g;
        },
        B, t0, t, opts.n_steps, opts.gauss_order);

    std::vector<double> riemann(B, 0.0);
    const auto part = uniform_partition(t0, t, opts.n_steps);
    std::vector<double> c0(model.modes()), c1(model.modes()), dx(Ke);
    model.c_at(part[0], c0);
    for (std::size_t k = 0; k + 1 < part.size(); ++k) {
        model.c_at(part[k + 1], c1);
        for (std::size_t j = 0; j < Ke; ++j) dx[j] = c1[j] - c0[j];
        functional(part[k], 1, y);
        kernels::omp::wick_first_order(*basis, y, dx, 1.0, riemann);
        std::swap(c0, c1);
    }

    rep.lhs = to_sparse(*basis, lhs);
    rep.initial = to_sparse(*basis, init);
    rep.wick_integral = to_sparse(*basis, wick);
    rep.correction = to_sparse(*basis, corr);
    finish_residuals(rep, to_sparse(*basis, riemann));
    model.c_at(t, cfull);
    rep.tail_bound = omitted_order_bound(f, std::span<const double>(cfull).first(Ke), var.v(t), rep.p, D);
    return rep;
}

ItoReport ito_polynomial(const ProcessModel& model, unsigned degree, const ItoOptions& opts) {
    if (degree < 1 || degree > 4)
        throw ParameterError("ito_polynomial: degree must be in 1..4, got " + std::to_string(degree));
    return ito_gaussian(model, GaussianFunction::monomial(degree), opts);
}

ExponentialItoReport ito_exponential(const ProcessModel& model, double alpha, const ItoOptions& opts) {
    if (!std::isfinite(alpha)) throw ParameterError("ito_exponential: alpha must be finite");
    ExponentialItoReport out;
    out.alpha = alpha;
    out.cos_part = ito_gaussian(model, GaussianFunction::cosine(alpha), opts);
    out.sin_part = ito_gaussian(model, GaussianFunction::sine(alpha), opts);
    const std::size_t D = out.cos_part.max_order;
    const std::size_t Ke = out.cos_part.modes;
    const int p = out.cos_part.p;
    const auto var = variance_fns(model, opts.variance);

    // lhs and initial term from exp^<>(i alpha X) = e^{alpha^2 r/2} e^{i alpha X}
    auto from_wick_exp = [&](double s, ChaosVector& cos_part, ChaosVector& sin_part) {
        auto c = model.c(s);
        c.resize(Ke);
        for (double& x : c) x *= alpha;
        const ChaosVector e = wick_exp(ChaosVector::first_order(c), D + 1);
        const double scale = std::exp(-0.5 * alpha * alpha * var.v(s));
        std::vector<ChaosVector::Term> ct, st;
        for (const auto& term : e.terms()) {
            const auto n = term.alpha.order();
            const double sign = (n / 2) % 2 == 0 ? 1.0 : -1.0;  // i^n
            (n % 2 == 0 ? ct : st).push_back({term.alpha, sign * scale * term.coeff});
        }
        cos_part = ChaosVector(std::move(ct), {D, Ke});
        sin_part = ChaosVector(std::move(st), {D, Ke});
    };
    ChaosVector lc, ls, ic, is;
    from_wick_exp(out.cos_part.t, lc, ls);
    from_wick_exp(out.cos_part.t0, ic, is);
    out.representation_gap =
        std::max({dual_norm_k(lc - out.cos_part.lhs, p), dual_norm_k(ls - out.sin_part.lhs, p),
                  dual_norm_k(ic - out.cos_part.initial, p), dual_norm_k(is - out.sin_part.initial, p)});

    // residuals against the wick_exp left-hand sides; the Riemann residual is
    // kept from the moment form (the two differ by representation_gap)
    for (auto* part : {&out.cos_part, &out.sin_part}) {
        const bool is_cos = part == &out.cos_part;
        part->lhs = is_cos ? lc : ls;
        part->initial = is_cos ? ic : is;
        part->regime = Regime::wick_exp;
        const ChaosVector base = part->lhs - part->initial;
        const ChaosVector res = base - part->wick_integral - part->correction;
        part->residual = dual_norm_k(res, p);
        part->residual_without_correction = dual_norm_k(base - part->wick_integral, p);
        part->residual_by_order = norm_by_order(res, p, D);
    }
    out.residual = std::hypot(out.cos_part.residual, out.sin_part.residual);
    out.constant_term = out.cos_part.lhs.constant_term();
    out.characteristic = std::exp(-0.5 * alpha * alpha * r_of_t(out.cos_part.t, model.density()));
    out.tail_bound = std::hypot(out.cos_part.tail_bound, out.sin_part.tail_bound);
    if (out.tail_bound > opts.tolerance) {
        std::ostringstream msg;
        msg << "ito_exponential: chaos orders above " << D << " carry up to " << out.tail_bound
            << " in ||.||'_" << p << " (tolerance " << opts.tolerance << "); raise the order cap";
        throw AccuracyError(msg.str());
    }
    return out;
}

// ---------------------------------------------------------------------------

ItoReport ito_pathwise(const ProcessModel& model, const ScalarFunction& f, double t0, double t, std::size_t n_steps,
                       std::size_t n_paths, std::uint64_t seed) {
    if (!f.f || !f.df || !f.d2f) throw ParameterError("ito_pathwise: f, f' and f'' are required");
    if (!(t > t0) || n_steps == 0 || n_paths < 2) throw ParameterError("ito_pathwise: need t > t0, steps >= 1, paths >= 2");
    if (model.density().singular_derivative_at_zero() && t0 < 1e-6)
        throw DomainError("ito_pathwise: r' is singular at 0 for " + model.density().descriptor());
    const std::size_t K = model.modes();
    const std::size_t T = n_steps + 1;
    const auto times = uniform_partition(t0, t, n_steps);

    std::vector<double> coeff(T * K);
    for (std::size_t i = 0; i < T; ++i) model.c_at(times[i], {coeff.data() + i * K, K});
    std::vector<double> rk(T, 0.0);   // r_K(t_i)
    std::vector<double> exd(T, 0.0);  // E[X_i (X_{i+1} - X_i)]
    for (std::size_t i = 0; i < T; ++i) {
        for (std::size_t k = 0; k < K; ++k) {
            const double c = coeff[i * K + k];
            rk[i] += c * c;
            if (i + 1 < T) exd[i] += c * (coeff[(i + 1) * K + k] - c);
        }
    }

    constexpr std::size_t kBatch = 512;
    std::vector<double> L(n_paths), Wt(n_paths), Cr(n_paths);
    std::vector<double> z;
    std::vector<double> x;
    for (std::size_t b0 = 0; b0 < n_paths; b0 += kBatch) {
        const std::size_t nb = std::min(kBatch, n_paths - b0);
        z.assign(nb * K, 0.0);
        for (std::size_t j = 0; j < nb; ++j) fill_normal(seed, b0 + j, {z.data() + j * K, K});
        x.assign(T * nb, 0.0);
        kernels::omp::synthesize_paths(coeff, T, K, z, nb, x);
        for (std::size_t j = 0; j < nb; ++j) {
            double wick = 0.0;
            double corr = 0.0;
            double f2 = f.d2f(x[j]);
            for (std::size_t i = 0; i + 1 < T; ++i) {
                const double xi = x[i * nb + j];
                const double xn = x[(i + 1) * nb + j];
                const double f2n = f.d2f(xn);
                wick += f.df(xi) * (xn - xi) - f2 * exd[i];
                corr += 0.25 * (f2 + f2n) * (rk[i + 1] - rk[i]);
                f2 = f2n;
            }
            L[b0 + j] = f.f(x[(T - 1) * nb + j]) - f.f(x[j]);
            Wt[b0 + j] = wick;
            Cr[b0 + j] = corr;
        }
    }

    auto stat = [n_paths](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m += x;
        m /= static_cast<double>(n_paths);
        double s = 0.0;
        for (double x : v) s += (x - m) * (x - m);
        return McStatistic{m, std::sqrt(s / static_cast<double>(n_paths - 1) / static_cast<double>(n_paths))};
    };
    std::vector<double> R(n_paths);
    double max_abs = 0.0;
    for (std::size_t j = 0; j < n_paths; ++j) {
        R[j] = L[j] - Wt[j] - Cr[j];
        max_abs = std::max(max_abs, std::abs(R[j]));
    }

    ItoReport rep;
    rep.f_descriptor = f.descriptor;
    rep.density = model.density().descriptor();
    rep.regime = Regime::monte_carlo;
    rep.variance = VarianceSource::series;
    rep.t0 = t0;
    rep.t = t;
    rep.p = model.N() + 4;
    rep.n_steps = n_steps;
    rep.modes = K;
    rep.paths = n_paths;
    rep.seed = seed;
    rep.mc_lhs = stat(L);
    rep.mc_wick = stat(Wt);
    rep.mc_correction = stat(Cr);
    rep.mc_residual = stat(R);
    rep.mc_max_abs_residual = max_abs;
    return rep;
}

}  // namespace wickito
