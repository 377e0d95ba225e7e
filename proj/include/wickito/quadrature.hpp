#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace wickito::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const noexcept { return nodes.size(); }
};

// n-point Gauss-Legendre rule on [-1, 1].
Rule gauss_legendre(std::size_t n);

// Gauss-Legendre of the given order on each of `panels` equal panels of [a, b].
Rule composite_gauss_legendre(double a, double b, std::size_t panels, std::size_t order);

// Same, on arbitrary panel edges (strictly increasing).
Rule composite_gauss_legendre(std::span<const double> edges, std::size_t order);

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evaluations = 0;
};

using ScalarFn = std::function<double(double)>;

// Globally adaptive 21-point Gauss-Kronrod on a finite interval. Stops when
// the summed error estimate is below max(abs_tol, rel_tol * |I|).
// Throws AccuracyError when max_intervals is exhausted.
Result adaptive_gk(const ScalarFn& f, double a, double b, double abs_tol, double rel_tol = 0.0,
                   std::size_t max_intervals = 2000);

// Vector-valued integrand writes `dim` components at t.
using VectorFn = std::function<void(double, std::span<double>)>;

struct VectorResult {
    std::vector<double> value;
    double max_abs_error = 0.0;  // sum over intervals of the max-component error
    std::size_t evaluations = 0;
};

// Adaptive Gauss-Kronrod with coefficientwise error control: the per-interval
// error is the largest componentwise |K21 - G10| and refinement continues
// until the summed error is <= abs_tol.
VectorResult adaptive_gk_vector(const VectorFn& f, std::size_t dim, double a, double b, double abs_tol,
                                std::size_t max_intervals = 4000);

// The following wrap GSL QUADPACK routines; all throw AccuracyError on failure.

// int_a^b f, endpoint singularities allowed (QAGS).
Result qags(const ScalarFn& f, double a, double b, double abs_tol, double rel_tol);

// int_a^inf f (QAGIU).
Result qagiu(const ScalarFn& f, double a, double abs_tol, double rel_tol);

enum class Oscillation { cosine, sine };

// int_a^inf f(u) cos(omega u) du or the sine version (QAWF).
Result qawf(const ScalarFn& f, double a, double omega, Oscillation kind, double abs_tol);

}  // namespace wickito::quad
