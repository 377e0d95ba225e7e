#include "wickito/chaos.hpp"

#include "wickito/errors.hpp"
#include "wickito/hermite.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

namespace wickito {

namespace {

bool term_less(const ChaosVector::Term& a, const ChaosVector::Term& b) { return a.alpha < b.alpha; }

// log(sum exp(l_i)) over the given log terms; -inf for an empty set.
class LogSum {
public:
    void add(double l) {
        if (l == -std::numeric_limits<double>::infinity()) return;
        if (l > max_) {
            sum_ = sum_ * std::exp(max_ - l) + 1.0;
            max_ = l;
        } else {
            sum_ += std::exp(l - max_);
        }
    }
    double value() const { return sum_ == 0.0 ? -std::numeric_limits<double>::infinity() : max_ + std::log(sum_); }

private:
    double max_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
};

double alpha_factorial(const MultiIndex& a) {
    const double lf = log_factorial(a);
    if (lf < 36.0) return static_cast<double>(factorial(a));  // < 2^52: exact integer
    return std::exp(lf);
}

}  // namespace

ChaosVector::ChaosVector(std::vector<Term> terms) : terms_(std::move(terms)) {
    canonicalize();
    truncation_ = {support_order(), support_length()};
}

ChaosVector::ChaosVector(std::vector<Term> terms, Truncation truncation)
    : terms_(std::move(terms)), truncation_(truncation) {
    canonicalize();
    if (support_order() > truncation_.max_order || support_length() > truncation_.max_length)
        throw ParameterError("ChaosVector: support exceeds the declared truncation");
}

ChaosVector ChaosVector::constant(double c) { return ChaosVector({{MultiIndex{}, c}}, {0, 0}); }

ChaosVector ChaosVector::basis(const MultiIndex& alpha, double coeff) { return ChaosVector({{alpha, coeff}}); }

ChaosVector ChaosVector::first_order(std::span<const double> coeffs) {
    std::vector<Term> t;
    t.reserve(coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        if (coeffs[k] != 0.0) t.push_back({MultiIndex::unit(k + 1), coeffs[k]});
    return ChaosVector(std::move(t), {1, coeffs.size()});
}

void ChaosVector::canonicalize() {
    std::stable_sort(terms_.begin(), terms_.end(), term_less);
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms_.size();) {
        double sum = 0.0;
        std::size_t j = i;
        for (; j < terms_.size() && terms_[j].alpha == terms_[i].alpha; ++j) sum += terms_[j].coeff;
        if (!std::isfinite(sum)) throw ParameterError("ChaosVector: non-finite coefficient");
        if (sum != 0.0) {
            if (out != i) terms_[out].alpha = std::move(terms_[i].alpha);
            terms_[out].coeff = sum;
            ++out;
        }
        i = j;
    }
    terms_.resize(out);
}

double ChaosVector::coeff(const MultiIndex& alpha) const {
    const auto it = std::lower_bound(terms_.begin(), terms_.end(), Term{alpha, 0.0}, term_less);
    return it != terms_.end() && it->alpha == alpha ? it->coeff : 0.0;
}

double ChaosVector::constant_term() const {
    return !terms_.empty() && terms_.front().alpha.is_zero() ? terms_.front().coeff : 0.0;
}

std::size_t ChaosVector::support_order() const noexcept {
    // canonical order is graded, so the last term has the largest order
    return terms_.empty() ? 0 : static_cast<std::size_t>(terms_.back().alpha.order());
}

std::size_t ChaosVector::support_length() const noexcept {
    std::size_t len = 0;
    for (const auto& t : terms_) len = std::max(len, t.alpha.length());
    return len;
}

ChaosVector ChaosVector::merge(const ChaosVector& a, const ChaosVector& b, double sign) {
    ChaosVector r;
    r.truncation_ = {std::max(a.truncation_.max_order, b.truncation_.max_order),
                     std::max(a.truncation_.max_length, b.truncation_.max_length)};
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
        if (j == b.terms_.end() || (i != a.terms_.end() && i->alpha < j->alpha)) {
            r.terms_.push_back(*i++);
        } else if (i == a.terms_.end() || j->alpha < i->alpha) {
            r.terms_.push_back({j->alpha, sign * j->coeff});
            ++j;
        } else {
            const double v = i->coeff + sign * j->coeff;
            if (v != 0.0) r.terms_.push_back({i->alpha, v});
            ++i;
            ++j;
        }
    }
    return r;
}

ChaosVector& ChaosVector::operator+=(const ChaosVector& other) { return *this = merge(*this, other, 1.0); }

ChaosVector& ChaosVector::operator-=(const ChaosVector& other) { return *this = merge(*this, other, -1.0); }

ChaosVector& ChaosVector::operator*=(double s) {
    if (!std::isfinite(s)) throw ParameterError("ChaosVector: non-finite scalar");
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.coeff *= s;
    return *this;
}

// ---------------------------------------------------------------------------

double norm_k(const ChaosVector& f, double k) {
    LogSum acc;
    for (const auto& t : f.terms())
        acc.add(2.0 * log_factorial(t.alpha) + 2.0 * std::log(std::abs(t.coeff)) + log_weight(t.alpha, k));
    return std::exp(0.5 * acc.value());
}

double dual_norm_k(const ChaosVector& g, double k) {
    LogSum acc;
    for (const auto& t : g.terms()) acc.add(2.0 * std::log(std::abs(t.coeff)) + log_weight(t.alpha, -k));
    return std::exp(0.5 * acc.value());
}

double wiener_norm(const ChaosVector& f) {
    LogSum acc;
    for (const auto& t : f.terms()) acc.add(log_factorial(t.alpha) + 2.0 * std::log(std::abs(t.coeff)));
    return std::exp(0.5 * acc.value());
}

double pairing(const ChaosVector& g, const ChaosVector& f) {
    double sum = 0.0;
    auto i = g.terms().begin();
    auto j = f.terms().begin();
    while (i != g.terms().end() && j != f.terms().end()) {
        if (i->alpha < j->alpha) {
            ++i;
        } else if (j->alpha < i->alpha) {
            ++j;
        } else {
            sum += alpha_factorial(i->alpha) * i->coeff * j->coeff;
            ++i;
            ++j;
        }
    }
    return sum;
}

ChaosVector wick(const ChaosVector& f, const ChaosVector& g) {
    if (f.size() != 0 && g.size() > kMaxWickProducts / f.size())
        throw TruncationOverflow("wick: " + std::to_string(f.size()) + " x " + std::to_string(g.size()) +
                                 " products exceed the global cap");
    const Truncation tr{f.truncation().max_order + g.truncation().max_order,
                        f.truncation().max_length + g.truncation().max_length};
    std::unordered_map<MultiIndex, double, MultiIndexHash> acc;
    acc.reserve(f.size() * g.size());
    for (const auto& a : f.terms())
        for (const auto& b : g.terms()) acc[a.alpha + b.alpha] += a.coeff * b.coeff;
    std::vector<ChaosVector::Term> terms;
    terms.reserve(acc.size());
    for (auto& [alpha, c] : acc) terms.push_back({alpha, c});
    return ChaosVector(std::move(terms), tr);
}

double vage_constant_c(double c) {
    if (!(c > 1.0)) throw DivergenceError("vage_constant: sum over multi-indices diverges for c <= 1");
    // log prod_j (1 - (2j)^{-c})^{-1}: first J factors explicitly, the rest as
    // sum_m 2^{-cm}/m * zeta(cm, J + 1).
    constexpr int J = 1000;
    double log_p = 0.0;
    for (int j = J; j >= 1; --j) log_p -= std::log1p(-std::pow(2.0 * j, -c));
    gsl_set_error_handler_off();
    for (int m = 1; m < 200; ++m) {
        gsl_sf_result z;
        if (gsl_sf_hzeta_e(c * m, J + 1.0, &z) != GSL_SUCCESS) break;
        const double term = std::pow(2.0, -c * m) / m * z.val;
        log_p += term;
        if (term < 1e-18 * log_p || term == 0.0) break;
    }
    return std::exp(0.5 * log_p);
}

double vage_constant(int k, int l) {
    if (k - l < 2) throw DivergenceError("vage_constant: need k - l >= 2, got k=" + std::to_string(k) +
                                         ", l=" + std::to_string(l));
    return vage_constant_c(static_cast<double>(k - l));
}

ChaosVector wick_exp(const ChaosVector& f, std::size_t terms) {
    if (terms == 0) throw ParameterError("wick_exp: need at least one term");
    const double f0 = f.constant_term();
    ChaosVector g = f - ChaosVector::constant(f0);
    ChaosVector result = ChaosVector::constant(1.0);
    ChaosVector power = result;
    for (std::size_t n = 1; n < terms; ++n) {
        power = wick(power, g);
        power *= 1.0 / static_cast<double>(n);
        result += power;
    }
    return result * std::exp(f0);
}

double eval_realization(const ChaosVector& f, std::span<const double> z) {
    if (z.size() < f.support_length())
        throw DimensionError("eval_realization: realization has " + std::to_string(z.size()) +
                             " coordinates, support needs " + std::to_string(f.support_length()));
    double sum = 0.0;
    for (const auto& t : f.terms()) {
        double prod = t.coeff;
        const auto e = t.alpha.entries();
        for (std::size_t j = 0; j < e.size(); ++j)
            if (e[j] != 0) prod *= hermite_poly(e[j], z[j]);
        sum += prod;
    }
    return sum;
}

}  // namespace wickito
