#include "wickito/spectral.hpp"

#include "wickito/errors.hpp"
#include "wickito/hermite.hpp"
#include "wickito/quadrature.hpp"

#include <fftw3.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <istream>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>

namespace wickito {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDerivativeThreshold = 1e-6;

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

bool parse_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

bool is_even_integer(double e) {
    return e >= 0.0 && std::floor(e) == e && std::fmod(e, 2.0) == 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------

SpectralDensity::SpectralDensity(std::string descriptor, std::function<double(double)> m, DensityBounds bounds,
                                 DensityAsymptotics asymptotics)
    : descriptor_(std::move(descriptor)), m_(std::move(m)), bounds_(bounds), asymptotics_(asymptotics) {
    if (!m_) throw ParameterError("SpectralDensity: empty function");
    if (!(bounds_.K > 0.0) || !std::isfinite(bounds_.K)) throw ParameterError("SpectralDensity: K must be positive");
    if (!(bounds_.b < 2.0)) throw ParameterError("SpectralDensity: b must be < 2");
    if (bounds_.N < 0) throw ParameterError("SpectralDensity: N must be nonnegative");
}

double SpectralDensity::symbol(double u) const { return std::sqrt(kTwoPi * (*this)(u)); }

bool SpectralDensity::singular_derivative_at_zero() const noexcept {
    return asymptotics_.high_exponent && *asymptotics_.high_exponent > 0.0;
}

double SpectralDensity::growth_bound_ratio(double u_min, double u_max, std::size_t points) const {
    if (!(u_min > 0.0) || !(u_max > u_min) || points < 2) throw ParameterError("growth_bound_ratio: bad grid");
    const double lo = std::log(u_min);
    const double hi = std::log(u_max);
    double worst = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double u = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
        const double bound = u <= 1.0 ? bounds_.K * std::pow(u, -bounds_.b) : bounds_.K * std::pow(u, 2.0 * bounds_.N);
        worst = std::max(worst, (*this)(u) / bound);
    }
    return worst;
}

namespace presets {

SpectralDensity white() {
    SpectralDensity d("white", [](double) { return 1.0 / kTwoPi; }, {1.0 / kTwoPi, 0.0, 0}, {0.0, 0.0});
    d.set_hurst(0.5);
    return d;
}

SpectralDensity fbm(double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw ParameterError("fbm: H must lie in (0, 1), got " + format_double(hurst));
    const double e = 1.0 - 2.0 * hurst;
    const int n = hurst < 0.5 ? 1 : 0;
    SpectralDensity d(
        "fbm:H=" + format_double(hurst), [e](double u) { return std::pow(u, e) / kTwoPi; },
        {1.0 / kTwoPi, 2.0 * hurst - 1.0, n}, {e, e});
    d.set_hurst(hurst);
    return d;
}

SpectralDensity quartic() {
    return SpectralDensity(
        "quartic", [](double u) { return u * u * u * u * std::exp(-2.0 * u * u); }, {1.0, 0.0, 2},
        {4.0, std::nullopt});
}

}  // namespace presets

SpectralDensity parse_preset(std::string_view spec) {
    if (spec == "white") return presets::white();
    if (spec == "quartic") return presets::quartic();
    if (spec.starts_with("fbm:")) {
        std::string_view rest = spec.substr(4);
        if (rest.starts_with("H=")) rest.remove_prefix(2);
        double h = 0.0;
        if (!parse_double(rest, h)) throw ParameterError("bad fbm preset '" + std::string(spec) + "'");
        return presets::fbm(h);
    }
    throw ParameterError("unknown density preset '" + std::string(spec) + "' (white, quartic, fbm:H=<x>)");
}

double hurst_constant(double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw ParameterError("hurst_constant: H must lie in (0, 1)");
    const double x = 1.0 - 2.0 * hurst;
    // cos(pi H) / (1 - 2H) = sin(pi x / 2) / x
    const double half = 0.5 * std::numbers::pi * x;
    const double ratio = std::abs(x) < 1e-4 ? 0.5 * std::numbers::pi * (1.0 - half * half / 6.0)
                                            : std::sin(half) / x;
    return std::tgamma(2.0 - 2.0 * hurst) * ratio / (std::numbers::pi * hurst);
}

// ---------------------------------------------------------------------------

SampledFunction SampledFunction::sample(const std::function<double(double)>& f, double t_min, double t_max,
                                        std::size_t n) {
    if (n < 2 || !(t_max > t_min)) throw ParameterError("SampledFunction: need n >= 2 and t_max > t_min");
    SampledFunction s{t_min, t_max, std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) s.values[i] = f(s.t(i));
    return s;
}

void write_csv(std::ostream& os, const SampledFunction& f) {
    os << "t,value\n";
    char buf[64];
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto r = std::to_chars(buf, buf + sizeof buf, f.t(i));
        *r.ptr++ = ',';
        r = std::to_chars(r.ptr, buf + sizeof buf, f.values[i]);
        os.write(buf, r.ptr - buf);
        os.put('\n');
    }
}

SampledFunction read_csv(std::istream& is) {
    std::vector<double> ts;
    std::vector<double> vs;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        double t = 0.0;
        double v = 0.0;
        if (comma == std::string::npos || !parse_double(std::string_view(line).substr(0, comma), t) ||
            !parse_double(std::string_view(line).substr(comma + 1), v)) {
            if (ts.empty() && vs.empty() && line.starts_with("t")) continue;  // header
            throw ParameterError("read_csv: malformed row '" + line + "'");
        }
        ts.push_back(t);
        vs.push_back(v);
    }
    if (ts.size() < 2) throw ParameterError("read_csv: need at least two rows");
    SampledFunction f{ts.front(), ts.back(), std::move(vs)};
    const double h = f.step();
    if (!(h > 0.0)) throw ParameterError("read_csv: grid must be increasing");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (std::abs(ts[i] - f.t(i)) > 1e-9 * std::max(1.0, std::abs(ts[i])) + 1e-6 * h)
            throw ParameterError("read_csv: grid is not uniform");
    }
    return f;
}

// ---------------------------------------------------------------------------

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
        if (!data) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    fftw_complex* data;
};

struct FftwPlan {
    FftwPlan(std::size_t n, fftw_complex* in, fftw_complex* out, int sign) {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign, FFTW_ESTIMATE);
        if (!plan) throw AccuracyError("apply_Tm: FFTW planning failed");
    }
    ~FftwPlan() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    FftwPlan(const FftwPlan&) = delete;
    FftwPlan& operator=(const FftwPlan&) = delete;
    fftw_plan plan;
};

}  // namespace

TmResult apply_Tm(const SampledFunction& f, const SpectralDensity& m, const TmOptions& opts) {
    const std::size_t n = f.size();
    if (n < 2) throw ParameterError("apply_Tm: need at least two samples");
    if (opts.padding_factor < 1) throw ParameterError("apply_Tm: padding_factor must be >= 1");
    const std::size_t big = n * opts.padding_factor;
    const std::size_t offset = (big - n) / 2;
    const double dx = f.step();
    const double du = kTwoPi / (static_cast<double>(big) * dx);

    FftwBuffer buf(big);
    FftwPlan forward(big, buf.data, buf.data, FFTW_FORWARD);
    FftwPlan backward(big, buf.data, buf.data, FFTW_BACKWARD);

    for (std::size_t i = 0; i < big; ++i) buf.data[i][0] = buf.data[i][1] = 0.0;
    for (std::size_t i = 0; i < n; ++i) buf.data[offset + i][0] = f.values[i];
    fftw_execute(forward.plan);

    // The translation to the true grid origin is a phase that commutes with
    // the real multiplier, so it is never applied.
    std::vector<double> sym(big);
    for (std::size_t j = 0; j < big; ++j) {
        const double jj = j < big / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(big);
        sym[j] = m.symbol(jj * du);
    }
    if (!std::isfinite(sym[0])) {
        // integrable singularity at u = 0: use the cell average
        const auto avg = quad::qags([&](double u) { return m.symbol(u); }, 0.0, 0.5 * du, 0.0, 1e-10);
        sym[0] = avg.value / (0.5 * du);
    }

    double peak = 0.0;
    double tail = 0.0;
    const double cut = 0.45 * static_cast<double>(big);
    for (std::size_t j = 0; j < big; ++j) {
        const double jj = j < big / 2 ? static_cast<double>(j) : static_cast<double>(big - j);
        const double e = std::hypot(buf.data[j][0], buf.data[j][1]) * sym[j];
        peak = std::max(peak, e);
        if (jj > cut) tail = std::max(tail, e);
        buf.data[j][0] *= sym[j];
        buf.data[j][1] *= sym[j];
    }
    if (peak > 0.0 && tail > opts.nyquist_tolerance * peak) {
        std::ostringstream msg;
        msg << "apply_Tm: grid too coarse for density " << m.descriptor() << " (tail/peak = " << tail / peak << ")";
        throw ResolutionError(msg.str());
    }

    fftw_execute(backward.plan);
    TmResult res;
    res.output = SampledFunction{f.t_min, f.t_max, std::vector<double>(n)};
    const double scale = 1.0 / static_cast<double>(big);
    for (std::size_t i = 0; i < n; ++i) {
        res.output.values[i] = buf.data[offset + i][0] * scale;
        res.max_imag_residual = std::max(res.max_imag_residual, std::abs(buf.data[offset + i][1] * scale));
    }
    return res;
}

// ---------------------------------------------------------------------------

namespace {

// Split point between the finite-range part and the oscillatory tail.
double split_point(double tau) { return std::max(1.0, 30.0 / tau); }

}  // namespace

double r_of_t(double t, const SpectralDensity& m) {
    const double tau = std::abs(t);
    if (tau == 0.0) return 0.0;
    const double U = split_point(tau);
    const auto head = quad::qags(
        [&](double u) {
            const double s = std::sin(0.5 * u * tau);
            return 8.0 * s * s * m(u) / (u * u);
        },
        0.0, U, 1e-15, 1e-12);
    // int_U^inf 4 m(u) / u^2 du with u = U / x
    const auto flat = quad::qags([&](double x) { return 4.0 * m(U / x) / U; }, 0.0, 1.0, 1e-15, 1e-12);
    const auto osc =
        quad::qawf([&](double u) { return 4.0 * m(u) / (u * u); }, U, tau, quad::Oscillation::cosine, 1e-14);
    return head.value + flat.value - osc.value;
}

double r_prime(double t, const SpectralDensity& m) {
    const double tau = std::abs(t);
    if (m.singular_derivative_at_zero() && tau < kDerivativeThreshold)
        throw DomainError("r_prime: derivative is singular at t = 0 for density " + m.descriptor());
    if (tau == 0.0) return 0.0;
    const double U = split_point(tau);
    const auto head = quad::qags([&](double u) { return 4.0 * std::sin(u * tau) * m(u) / u; }, 0.0, U, 1e-15, 1e-12);
    const auto osc = quad::qawf([&](double u) { return 4.0 * m(u) / u; }, U, tau, quad::Oscillation::sine, 1e-14);
    const double v = head.value + osc.value;
    return t < 0 ? -v : v;
}

double levy_khintchine_r(double t, const SpectralDensity& m) { return 0.5 * r_of_t(t, m); }

double covariance_quadrature(double t, double s, const SpectralDensity& m) {
    return 0.5 * (r_of_t(t, m) + r_of_t(s, m) - r_of_t(t - s, m));
}

namespace closed_form {

double fbm_covariance_printed(double hurst, double t, double s) {
    const double e = 2.0 * hurst;
    return hurst_constant(hurst) * (std::pow(std::abs(t), e) + std::pow(std::abs(s), e) - std::pow(std::abs(t - s), e));
}

double fbm_variance(double hurst, double t) { return hurst_constant(hurst) * std::pow(std::abs(t), 2.0 * hurst); }

double quartic_r_printed(double t) {
    const double t2 = t * t;
    return std::sqrt(2.0 * std::numbers::pi) / 8.0 * (1.0 - std::exp(-t2 / 8.0) * (1.0 + t2));
}

double quartic_variance(double t) {
    const double t2 = t * t;
    return std::sqrt(2.0 * std::numbers::pi) / 4.0 * (1.0 - (1.0 - t2 / 4.0) * std::exp(-t2 / 8.0));
}

}  // namespace closed_form

// ---------------------------------------------------------------------------

std::string SpectralQuadratureSettings::describe() const {
    std::ostringstream os;
    os << "w=" << format_double(panel_width) << ",o=" << panel_order << ",g=" << grading_levels
       << ",s=" << format_double(grading_ratio) << ",c=" << format_double(cutoff_margin);
    return os.str();
}

SpectralNodes build_spectral_nodes(const SpectralDensity& m, std::size_t modes,
                                   const SpectralQuadratureSettings& settings) {
    if (modes == 0) throw ParameterError("build_spectral_nodes: need at least one mode");
    if (!(settings.panel_width > 0.0) || settings.panel_order == 0 || !(settings.grading_ratio > 0.0) ||
        !(settings.grading_ratio < 1.0))
        throw ParameterError("build_spectral_nodes: bad quadrature settings");

    const double u_max = std::sqrt(2.0 * static_cast<double>(modes) + 1.0) + settings.cutoff_margin;
    const double w = settings.panel_width;
    std::vector<double> edges{0.0};
    if (!is_even_integer(m.asymptotics().low_exponent)) {
        for (std::size_t l = settings.grading_levels; l >= 1; --l)
            edges.push_back(w * std::pow(settings.grading_ratio, static_cast<double>(l)));
    }
    const auto panels = static_cast<std::size_t>(std::ceil(u_max / w));
    for (std::size_t i = 1; i <= panels; ++i) edges.push_back(w * static_cast<double>(i));
    const auto rule = quad::composite_gauss_legendre(edges, settings.panel_order);

    SpectralNodes nodes;
    nodes.modes = modes;
    nodes.u = rule.nodes;
    const std::size_t J = rule.size();
    nodes.g_even.assign(J * modes, 0.0);
    nodes.g_odd.assign(J * modes, 0.0);
    std::vector<double> psi(modes);
    for (std::size_t j = 0; j < J; ++j) {
        const double u = rule.nodes[j];
        hermite_fn_all(u, psi);
        const double base = 2.0 * rule.weights[j] * std::sqrt(m(u));
        for (std::size_t k = 0; k < modes; ++k) {
            const double sgn = (k / 2) % 2 == 0 ? 1.0 : -1.0;  // (-1)^{floor(n/2)}, n = k
            const double v = sgn * base * psi[k];
            (k % 2 == 0 ? nodes.g_even : nodes.g_odd)[j * modes + k] = v;
        }
    }
    return nodes;
}

double Tm_indicator_coeff(double t, std::size_t k, const SpectralDensity& m,
                          const SpectralQuadratureSettings& settings) {
    if (k == 0) throw ParameterError("Tm_indicator_coeff: modes are indexed from 1");
    if (t == 0.0) return 0.0;
    const auto nodes = build_spectral_nodes(m, k, settings);
    const std::size_t col = k - 1;
    const bool even = col % 2 == 0;
    double acc = 0.0;
    for (std::size_t j = 0; j < nodes.u.size(); ++j) {
        const double u = nodes.u[j];
        if (even) {
            acc += nodes.g_even[j * k + col] * std::sin(u * t) / u;
        } else {
            const double s = std::sin(0.5 * u * t);
            acc += nodes.g_odd[j * k + col] * 2.0 * s * s / u;
        }
    }
    return acc;
}

double Tm_hermite(double t, std::size_t k, const SpectralDensity& m, const SpectralQuadratureSettings& settings) {
    if (k == 0) throw ParameterError("Tm_hermite: modes are indexed from 1");
    const auto nodes = build_spectral_nodes(m, k, settings);
    const std::size_t col = k - 1;
    const bool even = col % 2 == 0;
    double acc = 0.0;
    for (std::size_t j = 0; j < nodes.u.size(); ++j) {
        const double u = nodes.u[j];
        acc += even ? nodes.g_even[j * k + col] * std::cos(u * t) : nodes.g_odd[j * k + col] * std::sin(u * t);
    }
    return acc;
}

}  // namespace wickito
