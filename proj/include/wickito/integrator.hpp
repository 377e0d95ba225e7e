#pragma once

#include "wickito/basis.hpp"
#include "wickito/chaos.hpp"
#include "wickito/process.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wickito {

// A continuous chaos-valued function t -> Y(t) of chaos order <= order() over
// the model's modes, evaluated densely on basis() = all indices of order
// <= order() + 1 (room for Y <> W). dual_index() is the declared p at which
// Y is uniformly bounded.
class Integrand {
public:
    using Eval = std::function<void(double t, std::span<double> out)>;

    Integrand(std::shared_ptr<const MultiIndexSet> basis, std::size_t order, int dual_index, Eval eval,
              std::string label);

    const MultiIndexSet& basis() const noexcept { return *basis_; }
    std::shared_ptr<const MultiIndexSet> basis_ptr() const noexcept { return basis_; }
    std::size_t order() const noexcept { return order_; }
    int dual_index() const noexcept { return dual_index_; }
    const std::string& label() const noexcept { return label_; }

    // Overwrites out (size basis().size()) with Y(t).
    void operator()(double t, std::span<double> out) const;
    ChaosVector at(double t) const;

    // Y(t) = value.
    static Integrand constant(const ProcessModel& model, double value = 1.0);
    // Y(t) = X(t).
    static Integrand process(const ProcessModel& model);
    // Y(t) = X(t_fixed): anticipating when t_fixed > t.
    static Integrand frozen_process(const ProcessModel& model, double t_fixed);
    // Y given as sparse vectors; every Y(t) must have order <= order and
    // support on the model's modes.
    static Integrand from_function(const ProcessModel& model, std::size_t order, int dual_index,
                                   std::function<ChaosVector(double)> f, std::string label);

private:
    std::shared_ptr<const MultiIndexSet> basis_;
    std::size_t order_;
    int dual_index_;
    Eval eval_;
    std::string label_;
};

// a Y1 + b Y2 on a common basis.
Integrand combine(double a, const Integrand& y1, double b, const Integrand& y2);

// Strictly increasing points; uniform_partition gives n intervals.
std::vector<double> uniform_partition(double a, double b, std::size_t n);

// sum_k Y(t_k) <> (X(t_{k+1}) - X(t_k)) over the partition.
std::vector<double> riemann_sum_dense(const Integrand& y, const ProcessModel& model, std::span<const double> partition);
ChaosVector riemann_sum(const Integrand& y, const ProcessModel& model, std::span<const double> partition);

struct ReferenceIntegral {
    std::vector<double> value;  // dense over y.basis()
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
};

// int_a^b Y(t) <> W(t) dt: adaptive Gauss-Kronrod on every cell of the
// model's coefficient grid (where the interpolated coefficients are smooth),
// with the summed coefficientwise error estimate <= tol.
ReferenceIntegral reference_integral_dense(const Integrand& y, const ProcessModel& model, double a, double b,
                                           double tol = 1e-10);
ChaosVector reference_integral(const Integrand& y, const ProcessModel& model, double a, double b, double tol = 1e-10);

// Composite Gauss-Legendre of a dense vector-valued function.
std::vector<double> gauss_integral(const std::function<void(double, std::span<double>)>& f, std::size_t dim,
                                   double a, double b, std::size_t panels, std::size_t order);

inline constexpr double kRoundoffFloor = 1e-13;

struct ConvergenceReport {
    std::string label;
    std::string density;
    double a = 0.0;
    double b = 1.0;
    int p = 0;
    std::vector<std::size_t> partitions;
    std::vector<double> errors;
    // eps(n) * A~ * A(p - N - 3) * (b - a) with eps(n) the sampled modulus of
    // continuity of Y in H'_p at step (b-a)/n and A~ = sup ||W||'_{N+3}.
    // Empty when p - N - 3 < 2 (Vage constant infinite).
    std::vector<double> bounds;
    // Least squares, two coarsest partitions excluded; empty when an error
    // is at or below kRoundoffFloor.
    std::optional<double> slope;
    double reference_error = 0.0;
};

// Errors ||riemann_sum(n) - reference||'_p. Requires p >= N + 4.
ConvergenceReport convergence_study(const Integrand& y, const ProcessModel& model, double a, double b,
                                    std::span<const std::size_t> n_list, int p, double tol = 1e-10);

void write_csv(std::ostream& os, const ConvergenceReport& r);

}  // namespace wickito
