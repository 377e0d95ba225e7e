#pragma once

// Dense chaos and coefficient kernels. kernels::serial holds plain reference
// loops; kernels::omp holds the OpenMP versions used by the library. The omp
// versions give the same bits for any thread count: work is cut into
// fixed-size blocks and reductions combine block partials in order.

#include <cstddef>
#include <span>

namespace wickito {

class MultiIndexSet;
struct SpectralNodes;

namespace kernels {

inline constexpr std::size_t kReductionChunk = 4096;
inline constexpr std::size_t kRowBlock = 64;

namespace serial {

// out[g] += scale * sum_k y[g - eps_k] v[k]: Wick product of y with the
// first-order vector sum_k v[k] H_{eps_k}. Entries of y at the top order are ignored.
void wick_first_order(const MultiIndexSet& basis, std::span<const double> y, std::span<const double> v,
                      double scale, std::span<double> out);

// out[i] = a[|b_i|] c^{b_i} / b_i! for |b_i| < a.size(), zero above.
void gaussian_functional(const MultiIndexSet& basis, std::span<const double> c, std::span<const double> a,
                         std::span<double> out);

// sum_i x_i^2 exp(-p log_w_i).
double weighted_sq_norm(std::span<const double> x, std::span<const double> log_w, double p);

// out[t][j] = sum_k coeff[t][k] z[j][k]; row-major (T x K), (P x K) -> (T x P).
void synthesize_paths(std::span<const double> coeff, std::size_t rows, std::size_t modes,
                      std::span<const double> z, std::size_t paths, std::span<double> out);

// c_k(t), w_k(t), w'_k(t) for each t, row-major (T x K). Empty output spans are skipped.
void spectral_rows(const SpectralNodes& nodes, std::span<const double> times, std::span<double> c,
                   std::span<double> w, std::span<double> dw);

}  // namespace serial

namespace omp {

// out[g] += scale * sum_k y[g - eps_k] v[k]: Wick product of y with the
// first-order vector sum_k v[k] H_{eps_k}. Entries of y at the top order are ignored.
void wick_first_order(const MultiIndexSet& basis, std::span<const double> y, std::span<const double> v,
                      double scale, std::span<double> out);

// out[i] = a[|b_i|] c^{b_i} / b_i! for |b_i| < a.size(), zero above.
void gaussian_functional(const MultiIndexSet& basis, std::span<const double> c, std::span<const double> a,
                         std::span<double> out);

// sum_i x_i^2 exp(-p log_w_i).
double weighted_sq_norm(std::span<const double> x, std::span<const double> log_w, double p);

// out[t][j] = sum_k coeff[t][k] z[j][k]; row-major (T x K), (P x K) -> (T x P).
void synthesize_paths(std::span<const double> coeff, std::size_t rows, std::size_t modes,
                      std::span<const double> z, std::size_t paths, std::span<double> out);

// c_k(t), w_k(t), w'_k(t) for each t, row-major (T x K). Empty output spans are skipped.
void spectral_rows(const SpectralNodes& nodes, std::span<const double> times, std::span<double> c,
                   std::span<double> w, std::span<double> dw);

}  // namespace omp

}  // namespace kernels
}  // namespace wickito
