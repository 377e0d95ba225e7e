#pragma once

#include "wickito/multi_index.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace wickito {

// Bounds within which a chaos vector is exact: every omitted coefficient
// with |alpha| <= max_order and length <= max_length is truly zero.
struct Truncation {
    std::size_t max_order = 0;
    std::size_t max_length = 0;

    friend bool operator==(const Truncation&, const Truncation&) = default;
};

// Largest number of pairwise products a single Wick product may form.
inline constexpr std::size_t kMaxWickProducts = 50'000'000;

// Sparse element F = sum_alpha f_alpha H_alpha of the chaos space, truncated.
// Terms are kept sorted in canonical MultiIndex order with no zero
// coefficients and no duplicates.
class ChaosVector {
public:
    struct Term {
        MultiIndex alpha;
        double coeff = 0.0;
    };

    ChaosVector() = default;
    // Duplicate indices are summed and zeros dropped. The truncation is the
    // tight box around the support unless given; a given truncation must
    // contain the support.
    explicit ChaosVector(std::vector<Term> terms);
    ChaosVector(std::vector<Term> terms, Truncation truncation);

    static ChaosVector constant(double c);
    static ChaosVector basis(const MultiIndex& alpha, double coeff = 1.0);
    // sum_k coeffs[k-1] H_{eps^(k)}; truncation (1, coeffs.size()).
    static ChaosVector first_order(std::span<const double> coeffs);

    std::span<const Term> terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }
    const Truncation& truncation() const noexcept { return truncation_; }

    // f_alpha (zero when not stored).
    double coeff(const MultiIndex& alpha) const;
    double constant_term() const;

    // Largest |alpha| and length over the stored support.
    std::size_t support_order() const noexcept;
    std::size_t support_length() const noexcept;

    ChaosVector& operator+=(const ChaosVector& other);
    ChaosVector& operator-=(const ChaosVector& other);
    ChaosVector& operator*=(double s);

    friend ChaosVector operator+(ChaosVector a, const ChaosVector& b) { return a += b; }
    friend ChaosVector operator-(ChaosVector a, const ChaosVector& b) { return a -= b; }
    friend ChaosVector operator*(ChaosVector a, double s) { return a *= s; }
    friend ChaosVector operator*(double s, ChaosVector a) { return a *= s; }

private:
    void canonicalize();
    static ChaosVector merge(const ChaosVector& a, const ChaosVector& b, double sign);

    std::vector<Term> terms_;
    Truncation truncation_;
};

// ||F||_k = (sum (alpha!)^2 f_alpha^2 (2N)^{k alpha})^{1/2}, accumulated in log space.
double norm_k(const ChaosVector& f, double k);

// ||G||'_k = (sum g_alpha^2 (2N)^{-k alpha})^{1/2}.
double dual_norm_k(const ChaosVector& g, double k);

// ||F||_W = (sum f_alpha^2 alpha!)^{1/2}, the L2(P) norm.
double wiener_norm(const ChaosVector& f);

// <G, F> = sum alpha! f_alpha g_alpha.
double pairing(const ChaosVector& g, const ChaosVector& f);

// (F <> G)_gamma = sum_{alpha + beta = gamma} f_alpha g_beta. The result
// truncation is the componentwise sum of the input truncations. Throws
// TruncationOverflow beyond kMaxWickProducts pairs.
ChaosVector wick(const ChaosVector& f, const ChaosVector& g);

// A(c) = (sum_alpha (2N)^{-c alpha})^{1/2} = prod_j (1 - (2j)^{-c})^{-1/2}
// for real c > 1, absolute error below 1e-12.
double vage_constant_c(double c);

// A(k - l); requires k - l >= 2, else DivergenceError.
double vage_constant(int k, int l);

// exp<>(F) = e^{f_0} sum_{n < terms} (F - f_0)^{<>n} / n!.
ChaosVector wick_exp(const ChaosVector& f, std::size_t terms);

// sum f_alpha prod_j h_{alpha_j}(z_j) with z_j playing the role of the
// standard normal coordinate of mode j (z[0] is mode 1). Throws
// DimensionError if z is shorter than the support length.
double eval_realization(const ChaosVector& f, std::span<const double> z);

}  // namespace wickito
