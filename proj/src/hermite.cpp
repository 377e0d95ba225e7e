#include "wickito/hermite.hpp"

#include "wickito/errors.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace wickito {

double hermite_poly(unsigned n, double x) {
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = x;
    for (unsigned j = 1; j < n; ++j) {
        const double next = x * cur - static_cast<double>(j) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

void hermite_poly_all(double x, std::span<double> out) {
    if (out.empty()) return;
    out[0] = 1.0;
    if (out.size() > 1) out[1] = x;
    for (std::size_t j = 1; j + 1 < out.size(); ++j)
        out[j + 1] = x * out[j] - static_cast<double>(j) * out[j - 1];
}

namespace {

constexpr double kRescaleAbove = 1e150;

// psi_0 .. psi_{m-1} at x. The recurrence is run on values scaled by
// exp(x^2/2) and the accumulated log-scale is folded back at the end.
void normalized_recurrence(double x, std::span<double> out) {
    const std::size_t m = out.size();
    if (m == 0) return;
    const double pi_quarter = std::pow(std::numbers::pi, -0.25);
    double log_scale = -0.5 * x * x;
    std::vector<double> log_at(m, 0.0);
    double prev = 0.0;
    double cur = 1.0;
    out[0] = cur;
    log_at[0] = log_scale;
    for (std::size_t n = 0; n + 1 < m; ++n) {
        const double dn = static_cast<double>(n);
        double next = std::sqrt(2.0 / (dn + 1.0)) * x * cur - std::sqrt(dn / (dn + 1.0)) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > kRescaleAbove) {
            prev /= kRescaleAbove;
            cur /= kRescaleAbove;
            log_scale += std::log(kRescaleAbove);
        }
        out[n + 1] = cur;
        log_at[n + 1] = log_scale;
    }
    for (std::size_t n = 0; n < m; ++n) {
        const double v = out[n];
        if (v == 0.0) {
            out[n] = 0.0;
        } else if (log_at[n] > -700.0 && log_at[n] < 700.0) {
            out[n] = pi_quarter * v * std::exp(log_at[n]);
        } else {
            out[n] = std::copysign(pi_quarter * std::exp(log_at[n] + std::log(std::abs(v))), v);
        }
    }
}

}  // namespace

double hermite_fn(unsigned k, double x) {
    if (k == 0) throw ParameterError("hermite_fn: k is 1-based");
    std::vector<double> buf(k);
    normalized_recurrence(x, buf);
    return buf.back();
}

void hermite_fn_all(double x, std::span<double> out) { normalized_recurrence(x, out); }

}  // namespace wickito
