#include "wickito/quadrature.hpp"

#include "wickito/errors.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <queue>
#include <string>
#include <utility>

namespace wickito::quad {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence (n >= 1).
std::pair<double, double> legendre(std::size_t n, double x) {
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
    }
    return {p1, static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

Rule gauss_legendre(std::size_t n) {
    if (n == 0) throw ParameterError("gauss_legendre: n must be positive");
    Rule r;
    r.nodes.assign(n, 0.0);
    r.weights.assign(n, 0.0);
    if (n == 1) {
        r.weights[0] = 2.0;
        return r;
    }
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double dp = legendre(n, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

Rule composite_gauss_legendre(std::span<const double> edges, std::size_t order) {
    if (edges.size() < 2) throw ParameterError("composite_gauss_legendre: need at least one panel");
    const Rule base = gauss_legendre(order);
    Rule r;
    r.nodes.reserve((edges.size() - 1) * order);
    r.weights.reserve((edges.size() - 1) * order);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double lo = edges[p];
        const double hi = edges[p + 1];
        if (!(hi > lo)) throw ParameterError("composite_gauss_legendre: edges must increase");
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        for (std::size_t i = 0; i < order; ++i) {
            r.nodes.push_back(mid + half * base.nodes[i]);
            r.weights.push_back(half * base.weights[i]);
        }
    }
    return r;
}

Rule composite_gauss_legendre(double a, double b, std::size_t panels, std::size_t order) {
    if (panels == 0) throw ParameterError("composite_gauss_legendre: panels must be positive");
    std::vector<double> edges(panels + 1);
    for (std::size_t i = 0; i <= panels; ++i)
        edges[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(panels);
    edges.back() = b;
    return composite_gauss_legendre(edges, order);
}

namespace {

// Kronrod 21 / Gauss 10 abscissae and weights (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

Interval gk21(const ScalarFn& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double rk = fc * kWgk[10];
    double rg = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        rk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) rg += kWg[j / 2] * (f1 + f2);
    }
    return {a, b, rk * h, std::abs((rk - rg) * h)};
}

}  // namespace

Result adaptive_gk(const ScalarFn& f, double a, double b, double abs_tol, double rel_tol,
                   std::size_t max_intervals) {
    std::priority_queue<Interval> heap;
    Interval first = gk21(f, a, b);
    double total = first.value;
    double err = first.error;
    std::size_t evals = 21;
    heap.push(first);
    while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (heap.size() >= max_intervals)
            throw AccuracyError("adaptive_gk: interval budget exhausted (error " + std::to_string(err) + ")");
        Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Interval l = gk21(f, worst.a, mid);
        Interval r = gk21(f, mid, worst.b);
        evals += 42;
        total += l.value + r.value - worst.value;
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
    }
    // re-sum to shed drift from incremental updates
    double sum = 0.0;
    double esum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        esum += heap.top().error;
        heap.pop();
    }
    return {sum, esum, evals};
}

namespace {

struct VecInterval {
    double a, b;
    std::vector<double> value;
    double error;
};

VecInterval gk21_vec(const VectorFn& f, std::size_t dim, double a, double b, std::vector<double>& scratch) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::vector<double> rk(dim, 0.0);
    std::vector<double> rg(dim, 0.0);
    scratch.assign(dim, 0.0);
    f(c, scratch);
    for (std::size_t i = 0; i < dim; ++i) rk[i] = kWgk[10] * scratch[i];
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = h * kXgk[j];
        for (int side = 0; side < 2; ++side) {
            std::fill(scratch.begin(), scratch.end(), 0.0);
            f(side ? c + dx : c - dx, scratch);
            for (std::size_t i = 0; i < dim; ++i) {
                rk[i] += kWgk[j] * scratch[i];
                if (j % 2 == 1) rg[i] += kWg[j / 2] * scratch[i];
            }
        }
    }
    double e = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        e = std::max(e, std::abs((rk[i] - rg[i]) * h));
        rk[i] *= h;
    }
    return {a, b, std::move(rk), e};
}

}  // namespace

VectorResult adaptive_gk_vector(const VectorFn& f, std::size_t dim, double a, double b, double abs_tol,
                                std::size_t max_intervals) {
    std::vector<double> scratch;
    std::vector<VecInterval> pieces;
    pieces.push_back(gk21_vec(f, dim, a, b, scratch));
    std::size_t evals = 21;
    auto total_error = [&] {
        double e = 0.0;
        for (const auto& p : pieces) e += p.error;
        return e;
    };
    double err = total_error();
    while (err > abs_tol) {
        if (pieces.size() >= max_intervals)
            throw AccuracyError("adaptive_gk_vector: interval budget exhausted (error " + std::to_string(err) +
                                ")");
        auto worst = std::max_element(pieces.begin(), pieces.end(),
                                      [](const VecInterval& x, const VecInterval& y) { return x.error < y.error; });
        const double lo = worst->a;
        const double hi = worst->b;
        const double mid = 0.5 * (lo + hi);
        VecInterval l = gk21_vec(f, dim, lo, mid, scratch);
        VecInterval r = gk21_vec(f, dim, mid, hi, scratch);
        evals += 42;
        *worst = std::move(l);
        pieces.push_back(std::move(r));
        err = total_error();
    }
    // sum in left-to-right order so the result does not depend on refinement history
    std::sort(pieces.begin(), pieces.end(), [](const VecInterval& x, const VecInterval& y) { return x.a < y.a; });
    VectorResult out;
    out.value.assign(dim, 0.0);
    for (const auto& p : pieces)
        for (std::size_t i = 0; i < dim; ++i) out.value[i] += p.value[i];
    out.max_abs_error = err;
    out.evaluations = evals;
    return out;
}

namespace {

constexpr std::size_t kGslLimit = 2000;

struct GslWorkspace {
    gsl_integration_workspace* w;
    explicit GslWorkspace(std::size_t n) : w(gsl_integration_workspace_alloc(n)) {}
    ~GslWorkspace() { gsl_integration_workspace_free(w); }
    GslWorkspace(const GslWorkspace&) = delete;
    GslWorkspace& operator=(const GslWorkspace&) = delete;
};

double trampoline(double x, void* params) { return (*static_cast<const ScalarFn*>(params))(x); }

void disable_gsl_abort() {
    static const bool once = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)once;
}

void check(int status, const char* what, double err, double value) {
    if (status == GSL_SUCCESS) return;
    // round-off limited results are accepted when the estimate is still small
    if (status == GSL_EROUND && err <= 1e-9 * std::max(1.0, std::abs(value))) return;
    throw AccuracyError(std::string(what) + ": " + gsl_strerror(status) + " (error estimate " +
                        std::to_string(err) + ")");
}

}  // namespace

Result qags(const ScalarFn& f, double a, double b, double abs_tol, double rel_tol) {
    disable_gsl_abort();
    GslWorkspace ws(kGslLimit);
    gsl_function F{&trampoline, const_cast<ScalarFn*>(&f)};
    double value = 0.0;
    double err = 0.0;
    const int status = gsl_integration_qags(&F, a, b, abs_tol, rel_tol, kGslLimit, ws.w, &value, &err);
    check(status, "qags", err, value);
    return {value, err, 0};
}

Result qagiu(const ScalarFn& f, double a, double abs_tol, double rel_tol) {
    disable_gsl_abort();
    GslWorkspace ws(kGslLimit);
    gsl_function F{&trampoline, const_cast<ScalarFn*>(&f)};
    double value = 0.0;
    double err = 0.0;
    const int status = gsl_integration_qagiu(&F, a, abs_tol, rel_tol, kGslLimit, ws.w, &value, &err);
    check(status, "qagiu", err, value);
    return {value, err, 0};
}

Result qawf(const ScalarFn& f, double a, double omega, Oscillation kind, double abs_tol) {
    disable_gsl_abort();
    GslWorkspace ws(kGslLimit);
    GslWorkspace cycles(kGslLimit);
    auto* table = gsl_integration_qawo_table_alloc(omega, 1.0,
                                                   kind == Oscillation::cosine ? GSL_INTEG_COSINE : GSL_INTEG_SINE,
                                                   50);
    std::unique_ptr<gsl_integration_qawo_table, decltype(&gsl_integration_qawo_table_free)> guard(
        table, &gsl_integration_qawo_table_free);
    gsl_function F{&trampoline, const_cast<ScalarFn*>(&f)};
    double value = 0.0;
    double err = 0.0;
    const int status = gsl_integration_qawf(&F, a, abs_tol, kGslLimit, ws.w, cycles.w, table, &value, &err);
    check(status, "qawf", err, value);
    return {value, err, 0};
}

}  // namespace wickito::quad
