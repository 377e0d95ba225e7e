#pragma once

#include <cstddef>
#include <span>

namespace wickito {

// Probabilists' Hermite polynomial h_n(x): h_0 = 1, h_1 = x,
// h_{n+1} = x h_n - n h_{n-1}. Evaluated by forward recurrence; overflows
// to inf only for |x|^n beyond double range.
double hermite_poly(unsigned n, double x);

// Writes h_0(x) .. h_{out.size()-1}(x).
void hermite_poly_all(double x, std::span<double> out);

// Orthonormal Hermite function, indexed from k = 1:
//   h~_k(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) exp(-x^2/2),  n = k - 1,
// with H_n the physicists' polynomial. Orthonormal in L2(R) and satisfies
// F[h~_k](u) = sqrt(2 pi) (-i)^{k-1} h~_k(u) for F f(u) = int e^{-iux} f(x) dx.
//
// Uses the normalized three-term recurrence with running rescaling, so it
// never forms factorials and stays finite for k in the thousands.
double hermite_fn(unsigned k, double x);

// Writes h~_1(x) .. h~_{out.size()}(x).
void hermite_fn_all(double x, std::span<double> out);

}  // namespace wickito
