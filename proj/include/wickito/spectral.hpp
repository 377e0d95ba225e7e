#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wickito {

// Growth bound m(u) <= K|u|^{-b} (|u| <= 1), m(u) <= K|u|^{2N} (|u| > 1).
struct DensityBounds {
    double K = 1.0;
    double b = 0.0;  // must be < 2
    int N = 0;
};

// Power-law behaviour m(u) ~ C|u|^e near 0 and near infinity. The high
// exponent is empty when m decays faster than any power. Used to model the
// tail of Hermite-series partial sums.
struct DensityAsymptotics {
    double low_exponent = 0.0;
    std::optional<double> high_exponent;
};

// Even, nonnegative spectral density m(u) defining X_m through
// E[X(t)X(s)] = int (e^{iut}-1)(e^{-ius}-1)/u^2 m(u) du.
class SpectralDensity {
public:
    SpectralDensity(std::string descriptor, std::function<double(double)> m, DensityBounds bounds,
                    DensityAsymptotics asymptotics);

    // m(u); evaluated at |u| so evenness holds by construction.
    double operator()(double u) const { return m_(u < 0 ? -u : u); }

    // Calibrated Fourier-multiplier symbol of T_m: sqrt(2 pi m(u)). With this
    // symbol ||T_m 1_[0,t]||^2 equals the covariance integral, and the white
    // density 1/(2 pi) acts as the identity.
    double symbol(double u) const;

    // Preset tag used in CLI flags and cache keys, e.g. "fbm:H=0.7".
    const std::string& descriptor() const noexcept { return descriptor_; }
    const DensityBounds& bounds() const noexcept { return bounds_; }
    const DensityAsymptotics& asymptotics() const noexcept { return asymptotics_; }

    // Hurst index for fbm presets (0.5 for white).
    std::optional<double> hurst() const noexcept { return hurst_; }
    void set_hurst(double h) { hurst_ = h; }

    // True when r'(t) blows up as t -> 0 (m grows at infinity, e.g. fbm with H < 1/2).
    bool singular_derivative_at_zero() const noexcept;

    // Largest ratio m(u) / bound(u) over a log-spaced grid in [u_min, u_max];
    // <= 1 means the growth bound holds there.
    double growth_bound_ratio(double u_min = 1e-6, double u_max = 1e6, std::size_t points = 2001) const;

private:
    std::string descriptor_;
    std::function<double(double)> m_;
    DensityBounds bounds_;
    DensityAsymptotics asymptotics_;
    std::optional<double> hurst_;
};

namespace presets {

// m = 1/(2 pi): standard Brownian motion.
SpectralDensity white();
// m = |u|^{1-2H} / (2 pi), 0 < H < 1.
SpectralDensity fbm(double hurst);
// m = u^4 exp(-2 u^2).
SpectralDensity quartic();

}  // namespace presets

// Parses "white", "quartic", "fbm:H=<x>" (also "fbm:<x>").
SpectralDensity parse_preset(std::string_view spec);

// V_H = Gamma(2-2H) cos(pi H) / (pi (1-2H) H), with the removable
// singularity at H = 1/2 filled in (V_{1/2} = 1).
double hurst_constant(double hurst);

// ---------------------------------------------------------------------------
// Sampled functions and the operator T_m on them.

struct SampledFunction {
    double t_min = 0.0;
    double t_max = 1.0;
    std::vector<double> values;  // values[i] at t_min + i * step()

    std::size_t size() const noexcept { return values.size(); }
    double step() const { return (t_max - t_min) / static_cast<double>(values.size() - 1); }
    double t(std::size_t i) const { return t_min + step() * static_cast<double>(i); }

    static SampledFunction sample(const std::function<double(double)>& f, double t_min, double t_max,
                                  std::size_t n);
};

void write_csv(std::ostream& os, const SampledFunction& f);
SampledFunction read_csv(std::istream& is);

struct TmOptions {
    std::size_t padding_factor = 4;
    // Spectral energy allowed in the top 10% of frequencies, relative to the peak.
    double nyquist_tolerance = 1e-8;
};

struct TmResult {
    SampledFunction output;
    double max_imag_residual = 0.0;
};

// T_m f = inverse transform of sqrt(2 pi m) * f^, by zero-padded FFT on the
// sample grid. Throws ResolutionError when the grid cannot resolve the
// product spectrum.
TmResult apply_Tm(const SampledFunction& f, const SpectralDensity& m, const TmOptions& opts = {});

// ---------------------------------------------------------------------------
// Variance function by quadrature.

// r(t) = Var X(t) = ||T_m 1_[0,t]||^2 = 4 int_0^inf (1 - cos tu) m(u)/u^2 du.
// This is the r entering the Ito correction term; white gives r(t) = |t|.
double r_of_t(double t, const SpectralDensity& m);

// r'(t) = sign(t) 4 int_0^inf sin(|t|u) m(u)/u du (0 at t = 0). Throws
// DomainError for |t| < 1e-6 when the derivative is singular at 0.
double r_prime(double t, const SpectralDensity& m);

// The function r appearing in the Levy-Khintchine form of the covariance,
// C(t,s) = r(t) + r(s) - r(t-s) - r(0); equals r_of_t / 2.
double levy_khintchine_r(double t, const SpectralDensity& m);

// E[X(t) X(s)] = (r(t) + r(s) - r(t - s)) / 2 with r = r_of_t.
double covariance_quadrature(double t, double s, const SpectralDensity& m);

// Closed forms for comparison with the quadrature.
namespace closed_form {

// V_H (|t|^{2H} + |s|^{2H} - |t-s|^{2H}) as printed; twice covariance_quadrature.
double fbm_covariance_printed(double hurst, double t, double s);
// Var X(t) for the fbm preset: V_H |t|^{2H}.
double fbm_variance(double hurst, double t);
// (sqrt(2 pi)/8) {1 - e^{-t^2/8} (1 + t^2)} as printed for m = u^4 e^{-2u^2}.
double quartic_r_printed(double t);
// Var X(t) for the quartic preset: (sqrt(2 pi)/4) {1 - (1 - t^2/4) e^{-t^2/8}}.
double quartic_variance(double t);

}  // namespace closed_form

// ---------------------------------------------------------------------------
// Chaos coefficients of X_m and W_m by quadrature on the frequency side.
//
// Using F[h~_k] = sqrt(2 pi) (-i)^{k-1} h~_k, for n = k - 1:
//   w_k(t) = (T_m h~_k)(t)         = (-i)^n int e^{iut} sqrt(m(u)) h~_k(u) du
//   c_k(t) = int_0^t w_k(s) ds     = (-i)^n int (e^{iut}-1)/(iu) sqrt(m(u)) h~_k(u) du
// Both are real for even m and reduce to one-sided sine/cosine integrals.

struct SpectralQuadratureSettings {
    double panel_width = 0.5;
    std::size_t panel_order = 24;
    std::size_t grading_levels = 24;  // geometric panels toward u = 0, used for non-smooth m
    double grading_ratio = 0.15;
    double cutoff_margin = 15.0;      // u_max = sqrt(2K + 1) + margin

    std::string describe() const;
};

// Nodes and mode-weighted matrices shared by every evaluation of c_k, w_k, w'_k.
struct SpectralNodes {
    std::size_t modes = 0;
    std::vector<double> u;       // quadrature nodes on (0, u_max]
    // Row-major [node][mode] matrices: 2 * weight * sqrt(m(u)) * h~_k(u) * (-1)^{floor(n/2)},
    // restricted to even n (g_even) or odd n (g_odd); the other half is zero.
    std::vector<double> g_even;
    std::vector<double> g_odd;
};

SpectralNodes build_spectral_nodes(const SpectralDensity& m, std::size_t modes,
                                   const SpectralQuadratureSettings& settings = {});

// c_k(t) for k = 1..K at a single t (reference path, no tables).
double Tm_indicator_coeff(double t, std::size_t k, const SpectralDensity& m,
                          const SpectralQuadratureSettings& settings = {});

// (T_m h~_k)(t).
double Tm_hermite(double t, std::size_t k, const SpectralDensity& m, const SpectralQuadratureSettings& settings = {});

}  // namespace wickito
