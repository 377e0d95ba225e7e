#include "wickito/integrator.hpp"

#include "wickito/errors.hpp"
#include "wickito/kernels.hpp"
#include "wickito/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace wickito {

namespace {

// ||w||'_q for a first-order vector.
double first_order_dual_norm(std::span<const double> w, double q) {
    double s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * w[k] * std::pow(2.0 * static_cast<double>(k + 1), -q);
    return std::sqrt(s);
}

void set_first_order(const MultiIndexSet& basis, std::span<const double> c, double scale, std::span<double> out) {
    const std::size_t first = basis.order_begin(1);
    for (std::size_t k = 0; k < c.size(); ++k) out[first + k] = scale * c[k];
}

}  // namespace

Integrand::Integrand(std::shared_ptr<const MultiIndexSet> basis, std::size_t order, int dual_index, Eval eval,
                     std::string label)
    : basis_(std::move(basis)), order_(order), dual_index_(dual_index), eval_(std::move(eval)), label_(std::move(label)) {
    if (!basis_ || !eval_) throw ParameterError("Integrand: missing basis or evaluator");
    if (basis_->max_order() < order_ + 1) throw ParameterError("Integrand: basis too small for Y <> W");
}

void Integrand::operator()(double t, std::span<double> out) const {
    if (out.size() != basis_->size()) throw ParameterError("Integrand: output has wrong size");
    eval_(t, out);
}

ChaosVector Integrand::at(double t) const {
    std::vector<double> y(basis_->size());
    (*this)(t, y);
    auto v = to_sparse(*basis_, y);
    return ChaosVector(std::vector<ChaosVector::Term>(v.terms().begin(), v.terms().end()),
                       {order_, basis_->modes()});
}

Integrand Integrand::constant(const ProcessModel& model, double value) {
    auto basis = shared_basis(1, model.modes());
    std::ostringstream label;
    label << "const:" << value;
    return Integrand(
        basis, 0, 0,
        [value](double, std::span<double> out) {
            std::fill(out.begin(), out.end(), 0.0);
            out[0] = value;
        },
        label.str());
}

Integrand Integrand::process(const ProcessModel& model) {
    auto basis = shared_basis(2, model.modes());
    const MultiIndexSet* b = basis.get();
    return Integrand(
        basis, 1, 0,
        [&model, b](double t, std::span<double> out) {
            std::fill(out.begin(), out.end(), 0.0);
            model.c_at(t, out.subspan(b->order_begin(1), model.modes()));
        },
        "X");
}

Integrand Integrand::frozen_process(const ProcessModel& model, double t_fixed) {
    auto basis = shared_basis(2, model.modes());
    const auto c = model.c(t_fixed);
    const MultiIndexSet* b = basis.get();
    std::ostringstream label;
    label << "X(" << t_fixed << ")";
    return Integrand(
        basis, 1, 0,
        [c, b](double, std::span<double> out) {
            std::fill(out.begin(), out.end(), 0.0);
            set_first_order(*b, c, 1.0, out);
        },
        label.str());
}

Integrand Integrand::from_function(const ProcessModel& model, std::size_t order, int dual_index,
                                   std::function<ChaosVector(double)> f, std::string label) {
    auto basis = shared_basis(order + 1, model.modes());
    const MultiIndexSet* b = basis.get();
    return Integrand(
        basis, order, dual_index,
        [f = std::move(f), b, order](double t, std::span<double> out) {
            const ChaosVector v = f(t);
            if (v.support_order() > order) throw TruncationOverflow("Integrand: value exceeds the declared order");
            std::fill(out.begin(), out.end(), 0.0);
            for (const auto& term : v.terms()) {
                const auto i = b->find(term.alpha);
                if (!i) throw TruncationOverflow("Integrand: index " + term.alpha.to_string() + " outside the modes");
                out[*i] = term.coeff;
            }
        },
        std::move(label));
}

Integrand combine(double a, const Integrand& y1, double b, const Integrand& y2) {
    auto basis = y1.order() >= y2.order() ? y1.basis_ptr() : y2.basis_ptr();
    if (y1.basis().modes() != y2.basis().modes()) throw ParameterError("combine: integrands use different modes");
    const std::size_t order = std::max(y1.order(), y2.order());
    auto lift = [basis](const Integrand& y) -> Integrand::Eval {
        if (y.basis_ptr() == basis) return [y](double t, std::span<double> out) { y(t, out); };
        // lower-order basis is a prefix of the larger one in canonical order
        return [y](double t, std::span<double> out) {
            std::fill(out.begin(), out.end(), 0.0);
            y(t, out.subspan(0, y.basis().size()));
        };
    };
    auto e1 = lift(y1);
    auto e2 = lift(y2);
    return Integrand(
        basis, order, std::max(y1.dual_index(), y2.dual_index()),
        [e1, e2, a, b](double t, std::span<double> out) {
            std::vector<double> tmp(out.size());
            e1(t, out);
            e2(t, tmp);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * out[i] + b * tmp[i];
        },
        "combine");
}

std::vector<double> uniform_partition(double a, double b, std::size_t n) {
    if (n == 0 || !(b > a)) throw ParameterError("uniform_partition: need n >= 1 and a < b");
    std::vector<double> p(n + 1);
    for (std::size_t k = 0; k <= n; ++k) p[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n);
    p[n] = b;
    return p;
}

std::vector<double> riemann_sum_dense(const Integrand& y, const ProcessModel& model,
                                      std::span<const double> partition) {
    if (partition.size() < 2) throw ParameterError("riemann_sum: empty partition");
    for (std::size_t k = 1; k < partition.size(); ++k)
        if (!(partition[k] > partition[k - 1])) throw ParameterError("riemann_sum: partition must increase");
    const auto& basis = y.basis();
    const std::size_t K = model.modes();
    std::vector<double> out(basis.size(), 0.0);
    std::vector<double> yk(basis.size());
    std::vector<double> c0 = model.c(partition[0]);
    std::vector<double> c1(K);
    std::vector<double> dx(K);
    for (std::size_t k = 0; k + 1 < partition.size(); ++k) {
        model.c_at(partition[k + 1], c1);
        for (std::size_t j = 0; j < K; ++j) dx[j] = c1[j] - c0[j];
        y(partition[k], yk);
        kernels::omp::wick_first_order(basis, yk, dx, 1.0, out);
        std::swap(c0, c1);
    }
    return out;
}

ChaosVector riemann_sum(const Integrand& y, const ProcessModel& model, std::span<const double> partition) {
    return to_sparse(y.basis(), riemann_sum_dense(y, model, partition));
}

ReferenceIntegral reference_integral_dense(const Integrand& y, const ProcessModel& model, double a, double b,
                                           double tol) {
    if (!(tol > 0.0)) throw ParameterError("reference_integral: tol must be positive");
    if (!(b > a)) throw ParameterError("reference_integral: need a < b");
    const auto& basis = y.basis();
    const auto& g = model.grid();
    if (!g.contains(a) || !g.contains(b)) throw RangeError("reference_integral: interval outside the coefficient grid");

    std::vector<double> edges{a};
    const double h = g.step();
    for (auto i = static_cast<std::size_t>(std::floor((a - g.t_min) / h)) + 1; i < g.size(); ++i) {
        const double t = g.node(i);
        if (t >= b) break;
        if (t > a + 1e-12 * h) edges.push_back(t);
    }
    edges.push_back(b);

    std::vector<double> yk(basis.size());
    std::vector<double> wk(model.modes());
    const quad::VectorFn f = [&](double t, std::span<double> out) {
        y(t, yk);
        model.w_at(t, wk);
        std::fill(out.begin(), out.end(), 0.0);
        kernels::omp::wick_first_order(basis, yk, wk, 1.0, out);
    };
    ReferenceIntegral res;
    res.value.assign(basis.size(), 0.0);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double lo = edges[i];
        const double hi = edges[i + 1];
        const auto part = quad::adaptive_gk_vector(f, basis.size(), lo, hi, tol * (hi - lo) / (b - a));
        for (std::size_t j = 0; j < basis.size(); ++j) res.value[j] += part.value[j];
        res.error_estimate += part.max_abs_error;
        res.evaluations += part.evaluations;
    }
    return res;
}

ChaosVector reference_integral(const Integrand& y, const ProcessModel& model, double a, double b, double tol) {
    return to_sparse(y.basis(), reference_integral_dense(y, model, a, b, tol).value);
}

std::vector<double> gauss_integral(const std::function<void(double, std::span<double>)>& f, std::size_t dim,
                                   double a, double b, std::size_t panels, std::size_t order) {
    const auto rule = quad::composite_gauss_legendre(a, b, panels, order);
    std::vector<double> acc(dim, 0.0);
    std::vector<double> tmp(dim);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        std::fill(tmp.begin(), tmp.end(), 0.0);
        f(rule.nodes[i], tmp);
        const double w = rule.weights[i];
        for (std::size_t j = 0; j < dim; ++j) acc[j] += w * tmp[j];
    }
    return acc;
}

ConvergenceReport convergence_study(const Integrand& y, const ProcessModel& model, double a, double b,
                                    std::span<const std::size_t> n_list, int p, double tol) {
    const int N = model.N();
    if (p < N + 4) throw ParameterError("convergence_study: need p >= N + 4");
    if (n_list.empty()) throw ParameterError("convergence_study: empty partition list");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1]) throw ParameterError("convergence_study: partitions must increase");

    const auto& basis = y.basis();
    ConvergenceReport rep;
    rep.label = y.label();
    rep.density = model.density().descriptor();
    rep.a = a;
    rep.b = b;
    rep.p = p;
    const auto ref = reference_integral_dense(y, model, a, b, tol);
    rep.reference_error = ref.error_estimate;

    const bool with_bound = p - N - 3 >= 2;
    const double vage = with_bound ? vage_constant(p, N + 3) : 0.0;
    double w_sup = 0.0;
    std::vector<double> wk(model.modes());

    std::vector<double> diff(basis.size());
    std::vector<double> y0(basis.size());
    std::vector<double> ys(basis.size());
    for (const std::size_t n : n_list) {
        const auto part = uniform_partition(a, b, n);
        const auto s = riemann_sum_dense(y, model, part);
        for (std::size_t j = 0; j < s.size(); ++j) diff[j] = s[j] - ref.value[j];
        rep.partitions.push_back(n);
        rep.errors.push_back(dual_norm(basis, diff, p));
        if (!with_bound) continue;
        double eps = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            y(part[k], y0);
            for (int q = 1; q <= 4; ++q) {
                const double t = part[k] + (part[k + 1] - part[k]) * q / 4.0;
                y(t, ys);
                for (std::size_t j = 0; j < ys.size(); ++j) ys[j] -= y0[j];
                eps = std::max(eps, dual_norm(basis, ys, p));
                model.w_at(t, wk);
                w_sup = std::max(w_sup, first_order_dual_norm(wk, N + 3));
            }
        }
        rep.bounds.push_back(eps);
    }
    for (double& e : rep.bounds) e *= w_sup * vage * (b - a);

    double cnt = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    bool positive = true;
    for (std::size_t i = std::min<std::size_t>(2, rep.errors.size()); i < rep.errors.size(); ++i) {
        if (!(rep.errors[i] > kRoundoffFloor)) positive = false;
        const double x = std::log(static_cast<double>(rep.partitions[i]));
        const double e = std::log(rep.errors[i]);
        cnt += 1, sx += x, sy += e, sxx += x * x, sxy += x * e;
    }
    if (positive && cnt >= 2) rep.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    return rep;
}

void write_csv(std::ostream& os, const ConvergenceReport& r) {
    os << "n,error" << (r.bounds.empty() ? "" : ",bound") << "\n";
    std::ostringstream row;
    row << std::setprecision(17);
    for (std::size_t i = 0; i < r.partitions.size(); ++i) {
        row.str("");
        row << r.partitions[i] << "," << r.errors[i];
        if (!r.bounds.empty()) row << "," << r.bounds[i];
        os << row.str() << "\n";
    }
}

}  // namespace wickito
