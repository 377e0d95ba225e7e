#include "wickito/kernels.hpp"

#include "wickito/basis.hpp"
#include "wickito/errors.hpp"
#include "wickito/spectral.hpp"

#include <cmath>

namespace wickito::kernels::serial {

void wick_first_order(const MultiIndexSet& basis, std::span<const double> y, std::span<const double> v,
                      double scale, std::span<double> out) {
    if (y.size() != basis.size() || out.size() != basis.size() || v.size() != basis.modes())
        throw ParameterError("wick_first_order: size mismatch");
    const std::size_t lower = basis.order_begin(basis.max_order());
    for (std::size_t i = 0; i < lower; ++i) {
        if (y[i] == 0.0) continue;
        const double yi = scale * y[i];
        for (std::size_t k = 0; k < v.size(); ++k) out[basis.successor(i, k)] += yi * v[k];
    }
}

void gaussian_functional(const MultiIndexSet& basis, std::span<const double> c, std::span<const double> a,
                         std::span<double> out) {
    if (c.size() != basis.modes() || out.size() != basis.size())
        throw ParameterError("gaussian_functional: size mismatch");
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const std::size_t q = basis.order(i);
        if (q >= a.size()) {
            out[i] = 0.0;
            continue;
        }
        double prod = a[q];
        for (const auto& e : basis.support(i))
            for (std::uint32_t n = 1; n <= e.exponent; ++n) prod *= c[e.mode] / n;
        out[i] = prod;
    }
}

double weighted_sq_norm(std::span<const double> x, std::span<const double> log_w, double p) {
    if (x.size() != log_w.size()) throw ParameterError("weighted_sq_norm: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * x[i] * std::exp(-p * log_w[i]);
    return s;
}

void synthesize_paths(std::span<const double> coeff, std::size_t rows, std::size_t modes,
                      std::span<const double> z, std::size_t paths, std::span<double> out) {
    if (coeff.size() != rows * modes || z.size() != paths * modes || out.size() != rows * paths)
        throw ParameterError("synthesize_paths: size mismatch");
    for (std::size_t t = 0; t < rows; ++t)
        for (std::size_t j = 0; j < paths; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < modes; ++k) s += coeff[t * modes + k] * z[j * modes + k];
            out[t * paths + j] = s;
        }
}

void spectral_rows(const SpectralNodes& nodes, std::span<const double> times, std::span<double> c,
                   std::span<double> w, std::span<double> dw) {
    const std::size_t K = nodes.modes;
    const std::size_t T = times.size();
    for (auto s : {c, w, dw})
        if (!s.empty() && s.size() != T * K) throw ParameterError("spectral_rows: size mismatch");
    for (std::size_t r = 0; r < T; ++r) {
        const double t = times[r];
        for (std::size_t k = 0; k < K; ++k) {
            const bool even = k % 2 == 0;
            const auto& g = even ? nodes.g_even : nodes.g_odd;
            double sc = 0.0;
            double sw = 0.0;
            double sd = 0.0;
            for (std::size_t j = 0; j < nodes.u.size(); ++j) {
                const double u = nodes.u[j];
                const double gj = g[j * K + k];
                const double sn = std::sin(u * t);
                const double cs = std::cos(u * t);
                if (even) {
                    sc += gj * sn / u;
                    sw += gj * cs;
                    sd -= gj * u * sn;
                } else {
                    const double h = std::sin(0.5 * u * t);
                    sc += gj * 2.0 * h * h / u;
                    sw += gj * sn;
                    sd += gj * u * cs;
                }
            }
            if (!c.empty()) c[r * K + k] = sc;
            if (!w.empty()) w[r * K + k] = sw;
            if (!dw.empty()) dw[r * K + k] = sd;
        }
    }
}

}  // namespace wickito::kernels::serial
