#pragma once

#include "wickito/chaos.hpp"
#include "wickito/process.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace wickito {

// A C^2 function with its first two derivatives.
struct ScalarFunction {
    std::string descriptor;
    std::function<double(double)> f;
    std::function<double(double)> df;
    std::function<double(double)> d2f;
};

// A function whose Gaussian derivative moments E[f^(j)(Z)], Z ~ N(0, v), are
// known in closed form. These are the chaos coefficients of f(X):
//   f(X) = sum_beta E[f^(|beta|)(X)] c^beta / beta! H_beta   for X = sum c_k H_{eps_k}.
struct GaussianFunction {
    ScalarFunction fn;
    std::function<double(unsigned j, double variance)> moment;
    std::optional<unsigned> degree;  // polynomial degree, if polynomial

    static GaussianFunction monomial(unsigned d);
    static GaussianFunction cosine(double alpha);
    static GaussianFunction sine(double alpha);
};

// Parses "x", "x2", "x^3", "cos", "cos:2", "sin:0.5".
GaussianFunction parse_function(const std::string& spec);

enum class Regime { exact, wick_exp, monte_carlo };
const char* to_string(Regime r);

// Source of r(t) and r'(t) in the exact regimes.
//   quadrature: the variance of the full process (r_of_t / r_prime);
//   series:     r_K = sum_k c_k^2 over the model's modes, the variance of
//               the truncated process that the Monte Carlo regime samples.
enum class VarianceSource { quadrature, series };
const char* to_string(VarianceSource v);

struct ItoOptions {
    std::optional<double> t0;  // default 0, or 0.01 when r' is singular at 0
    double t = 1.0;
    std::size_t n_steps = 1024;
    // Modes kept in the exact regimes; 0 picks the most modes whose basis
    // stays below kExactBasisCap.
    std::size_t modes = 0;
    std::size_t max_order = 12;  // chaos order cap for non-polynomial f
    std::optional<int> p;        // dual index of the residual, default N + 4
    VarianceSource variance = VarianceSource::quadrature;
    double tolerance = 1e-6;     // bound on the omitted chaos orders (exponential case)
    std::size_t gauss_order = 3; // Gauss-Legendre points per step for the time integrals
};

inline constexpr std::size_t kExactBasisCap = 300'000;

struct McStatistic {
    double mean = 0.0;
    double std_error = 0.0;
};

// Both sides of f(X(t)) = f(X(t0)) + int f'(X) <> W ds + 1/2 int f''(X) r'(s) ds.
struct ItoReport {
    std::string f_descriptor;
    std::string density;
    Regime regime = Regime::exact;
    VarianceSource variance = VarianceSource::quadrature;
    double t0 = 0.0;
    double t = 1.0;
    int p = 0;
    std::size_t n_steps = 0;
    std::size_t modes = 0;
    std::size_t max_order = 0;

    // exact and wick-exp regimes
    ChaosVector lhs;
    ChaosVector initial;
    ChaosVector wick_integral;  // time integral by Gauss-Legendre on n_steps panels
    ChaosVector correction;
    double residual = 0.0;                     // ||lhs - initial - wick - correction||'_p
    double residual_without_correction = 0.0;  // same with the correction dropped
    double riemann_residual = 0.0;             // wick term by left Riemann sums on n_steps
    std::vector<double> residual_by_order;
    double tail_bound = 0.0;                   // ||omitted orders of lhs||'_p bound

    // monte carlo regime
    std::size_t paths = 0;
    std::uint64_t seed = 0;
    McStatistic mc_lhs;         // f(X(t)) - f(X(t0))
    McStatistic mc_wick;        // pathwise value of the Wick-Riemann sum
    McStatistic mc_correction;
    McStatistic mc_residual;
    double mc_max_abs_residual = 0.0;
};

// Default start time: 0, or 0.01 when r' is singular at 0.
double default_t0(const SpectralDensity& m);

// Exact chaos algebra for f(x) = x^d, 1 <= d <= 4.
ItoReport ito_polynomial(const ProcessModel& model, unsigned degree, const ItoOptions& opts = {});

// Exact regime for any GaussianFunction, truncated at opts.max_order (or the
// polynomial degree).
ItoReport ito_gaussian(const ProcessModel& model, const GaussianFunction& f, const ItoOptions& opts = {});

// e^{i alpha X} carried as (cos, sin). The left-hand sides come from
// wick_exp(alpha X) with orders rotated by i^n and scaled by e^{-alpha^2 r/2}.
struct ExponentialItoReport {
    double alpha = 0.0;
    ItoReport cos_part;
    ItoReport sin_part;
    double residual = 0.0;              // sqrt(res_cos^2 + res_sin^2)
    double representation_gap = 0.0;   // ||wick_exp lhs - moment-formula lhs||'_p
    double constant_term = 0.0;         // cos-part lhs constant, E[cos alpha X(t)]
    double characteristic = 0.0;        // exp(-alpha^2 r(t) / 2), r by quadrature
    double tail_bound = 0.0;
};

// Throws AccuracyError when the omitted orders exceed opts.tolerance.
ExponentialItoReport ito_exponential(const ProcessModel& model, double alpha, const ItoOptions& opts = {});

// Pathwise check on Monte Carlo paths of the truncated process X_K. The Wick
// term is the realization of sum_k f'(X_k) <> dX_k, which for first-order dX_k
// is f'(X_k) dX_k - f''(X_k) E[X_k dX_k]. The correction is a trapezoid sum of
// f''(X) against increments of r_K.
ItoReport ito_pathwise(const ProcessModel& model, const ScalarFunction& f, double t0, double t, std::size_t n_steps,
                       std::size_t n_paths, std::uint64_t seed);

}  // namespace wickito
