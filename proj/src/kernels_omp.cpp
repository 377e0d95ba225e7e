#include "wickito/kernels.hpp"

#include "wickito/basis.hpp"
#include "wickito/errors.hpp"
#include "wickito/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>

#include <cmath>
#include <vector>

namespace wickito::kernels::omp {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::ptrdiff_t blocks_of(std::size_t n, std::size_t block) { return static_cast<std::ptrdiff_t>((n + block - 1) / block); }

}  // namespace

void wick_first_order(const MultiIndexSet& basis, std::span<const double> y, std::span<const double> v,
                      double scale, std::span<double> out) {
    if (y.size() != basis.size() || out.size() != basis.size() || v.size() != basis.modes())
        throw ParameterError("wick_first_order: size mismatch");
    const auto first = static_cast<std::ptrdiff_t>(basis.order_begin(1));
    const auto n = static_cast<std::ptrdiff_t>(basis.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t g = first; g < n; ++g) {
        double s = 0.0;
        for (const auto& p : basis.predecessors(static_cast<std::size_t>(g))) s += y[p.index] * v[p.mode];
        out[g] += scale * s;
    }
}

void gaussian_functional(const MultiIndexSet& basis, std::span<const double> c, std::span<const double> a,
                         std::span<double> out) {
    if (c.size() != basis.modes() || out.size() != basis.size())
        throw ParameterError("gaussian_functional: size mismatch");
    // monomials c^b / b! order by order from the first predecessor
    const std::size_t top = std::min(basis.max_order() + 1, a.size());
    out[0] = 1.0;
    for (std::size_t q = 1; q < top; ++q) {
        const auto lo = static_cast<std::ptrdiff_t>(basis.order_begin(q));
        const auto hi = static_cast<std::ptrdiff_t>(basis.order_begin(q + 1));
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = lo; i < hi; ++i) {
            const auto p = basis.predecessors(static_cast<std::size_t>(i)).front();
            const auto e = basis.support(static_cast<std::size_t>(i)).front();
            out[i] = out[p.index] * c[p.mode] / e.exponent;
        }
    }
    const auto n = static_cast<std::ptrdiff_t>(basis.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::size_t q = basis.order(static_cast<std::size_t>(i));
        out[i] = q < a.size() ? a[q] * out[i] : 0.0;
    }
}

double weighted_sq_norm(std::span<const double> x, std::span<const double> log_w, double p) {
    if (x.size() != log_w.size()) throw ParameterError("weighted_sq_norm: size mismatch");
    const std::ptrdiff_t chunks = blocks_of(x.size(), kReductionChunk);
    std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < chunks; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReductionChunk;
        const std::size_t hi = std::min(x.size(), lo + kReductionChunk);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += x[i] * x[i] * std::exp(-p * log_w[i]);
        partial[static_cast<std::size_t>(b)] = s;
    }
    double s = 0.0;
    for (double v : partial) s += v;
    return s;
}

void synthesize_paths(std::span<const double> coeff, std::size_t rows, std::size_t modes,
                      std::span<const double> z, std::size_t paths, std::span<double> out) {
    if (coeff.size() != rows * modes || z.size() != paths * modes || out.size() != rows * paths)
        throw ParameterError("synthesize_paths: size mismatch");
    const auto K = static_cast<Eigen::Index>(modes);
    const auto P = static_cast<Eigen::Index>(paths);
    Eigen::Map<const RowMatrix> Z(z.data(), P, K);
    const std::ptrdiff_t blocks = blocks_of(rows, kRowBlock);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < blocks; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kRowBlock;
        const auto n = static_cast<Eigen::Index>(std::min(rows, lo + kRowBlock) - lo);
        Eigen::Map<const RowMatrix> C(coeff.data() + lo * modes, n, K);
        Eigen::Map<RowMatrix> X(out.data() + lo * paths, n, P);
        X.noalias() = C * Z.transpose();
    }
}

void spectral_rows(const SpectralNodes& nodes, std::span<const double> times, std::span<double> c,
                   std::span<double> w, std::span<double> dw) {
    const std::size_t K = nodes.modes;
    const std::size_t T = times.size();
    for (auto s : {c, w, dw})
        if (!s.empty() && s.size() != T * K) throw ParameterError("spectral_rows: size mismatch");
    const auto J = static_cast<Eigen::Index>(nodes.u.size());
    const Eigen::Index ke = static_cast<Eigen::Index>((K + 1) / 2);
    const Eigen::Index ko = static_cast<Eigen::Index>(K / 2);

    // Right-hand sides, columns grouped as documented below.
    Eigen::MatrixXd rs(J, 2 * ke + ko);  // sin: [g_e/u | g_o | -u g_e] -> c_even, w_odd, w'_even
    Eigen::MatrixXd rc(J, ke + ko);      // cos: [g_e | u g_o]          -> w_even, w'_odd
    Eigen::MatrixXd rq(J, ko);           // 2 sin^2(ut/2): [g_o / u]    -> c_odd
    for (Eigen::Index j = 0; j < J; ++j) {
        const double u = nodes.u[static_cast<std::size_t>(j)];
        for (Eigen::Index m = 0; m < ke; ++m) {
            const double g = nodes.g_even[static_cast<std::size_t>(j) * K + 2 * static_cast<std::size_t>(m)];
            rs(j, m) = g / u;
            rs(j, ke + ko + m) = -u * g;
            rc(j, m) = g;
        }
        for (Eigen::Index m = 0; m < ko; ++m) {
            const double g = nodes.g_odd[static_cast<std::size_t>(j) * K + 2 * static_cast<std::size_t>(m) + 1];
            rs(j, ke + m) = g;
            rc(j, ke + m) = u * g;
            rq(j, m) = g / u;
        }
    }

    const std::ptrdiff_t blocks = blocks_of(T, kRowBlock);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < blocks; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kRowBlock;
        const auto n = static_cast<Eigen::Index>(std::min(T, lo + kRowBlock) - lo);
        Eigen::MatrixXd S(n, J), C(n, J), Q(n, J);
        for (Eigen::Index r = 0; r < n; ++r) {
            const double t = times[lo + static_cast<std::size_t>(r)];
            for (Eigen::Index j = 0; j < J; ++j) {
                const double ut = nodes.u[static_cast<std::size_t>(j)] * t;
                const double h = std::sin(0.5 * ut);
                S(r, j) = std::sin(ut);
                C(r, j) = std::cos(ut);
                Q(r, j) = 2.0 * h * h;
            }
        }
        const Eigen::MatrixXd ps = S * rs;
        const Eigen::MatrixXd pc = C * rc;
        const Eigen::MatrixXd pq = Q * rq;
        for (Eigen::Index r = 0; r < n; ++r) {
            const std::size_t row = (lo + static_cast<std::size_t>(r)) * K;
            for (Eigen::Index m = 0; m < ke; ++m) {
                const std::size_t k = 2 * static_cast<std::size_t>(m);
                if (!c.empty()) c[row + k] = ps(r, m);
                if (!w.empty()) w[row + k] = pc(r, m);
                if (!dw.empty()) dw[row + k] = ps(r, ke + ko + m);
            }
            for (Eigen::Index m = 0; m < ko; ++m) {
                const std::size_t k = 2 * static_cast<std::size_t>(m) + 1;
                if (!c.empty()) c[row + k] = pq(r, m);
                if (!w.empty()) w[row + k] = ps(r, ke + m);
                if (!dw.empty()) dw[row + k] = pc(r, ke + m);
            }
        }
    }
}

}  // namespace wickito::kernels::omp
