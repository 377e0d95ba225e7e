#pragma once

#include "wickito/chaos.hpp"
#include "wickito/spectral.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wickito {

struct TimeGrid {
    double t_min = 0.0;
    double t_max = 2.0;
    std::size_t intervals = 2048;

    double step() const { return (t_max - t_min) / static_cast<double>(intervals); }
    double node(std::size_t i) const { return t_min + step() * static_cast<double>(i); }
    std::size_t size() const { return intervals + 1; }
    bool contains(double t) const;
};

struct ProcessSettings {
    std::size_t modes = 200;
    TimeGrid grid;
    SpectralQuadratureSettings quadrature;
    // Read/write the coefficient table under $WICKITO_CACHE_DIR when set.
    bool use_cache = true;
};

// X_m(t) = sum_k c_k(t) H_{eps_k} and W_m(t) = sum_k w_k(t) H_{eps_k},
// truncated to K modes. c_k, w_k and w'_k are tabulated on the grid and
// interpolated by cubic Hermite splines (c with slopes w, w with slopes w').
class ProcessModel {
public:
    ProcessModel(SpectralDensity density, ProcessSettings settings = {});

    const SpectralDensity& density() const noexcept { return density_; }
    const ProcessSettings& settings() const noexcept { return settings_; }
    std::size_t modes() const noexcept { return settings_.modes; }
    const TimeGrid& grid() const noexcept { return settings_.grid; }
    int N() const noexcept { return density_.bounds().N; }
    // N + 3: the dual index in which W_m(t) lives.
    int dual_index() const noexcept { return N() + 3; }

    // Coefficients at arbitrary t in the grid range; RangeError outside.
    void c_at(double t, std::span<double> out) const;
    void w_at(double t, std::span<double> out) const;
    void dw_at(double t, std::span<double> out) const;
    std::vector<double> c(double t) const;
    std::vector<double> w(double t) const;

    // Table rows at grid node i.
    std::span<const double> c_row(std::size_t i) const;
    std::span<const double> w_row(std::size_t i) const;
    std::span<const double> dw_row(std::size_t i) const;

    // Same quantities by direct frequency quadrature (no table).
    void coefficients_direct(double t, std::span<double> c, std::span<double> w, std::span<double> dw) const;

    // Hash over (density, modes, grid, quadrature settings) identifying the table.
    std::string table_key() const;
    bool loaded_from_cache() const noexcept { return from_cache_; }

private:
    void build_tables();
    bool load_cache(const std::string& path);
    void store_cache(const std::string& path) const;
    void interpolate(const std::vector<double>& y, const std::vector<double>& slope, double t,
                     std::span<double> out) const;

    SpectralDensity density_;
    ProcessSettings settings_;
    SpectralNodes nodes_;
    std::vector<double> c_;   // (T+1) x K row-major
    std::vector<double> w_;
    std::vector<double> dw_;
    std::vector<double> ddw_;  // slopes of w', for interpolating dw
    bool from_cache_ = false;
};

ChaosVector X_chaos(const ProcessModel& model, double t);
ChaosVector W_chaos(const ProcessModel& model, double t);

// E[X(t)X(s)] by quadrature.
double covariance(const ProcessModel& model, double t, double s);

// sum_{k <= modes} c_k(t) c_k(s); modes = 0 means all model modes.
double series_covariance(const ProcessModel& model, double t, double s, std::size_t modes = 0);

// Partial sums S_K approach their limit like S - A K^{-gamma}, with gamma set
// by the power-law behaviour of m. The estimate fits (S, A) by least squares
// over K = 0 mod 4 in [K_max/4, K_max]; multiples of 4 remove the period-4
// sign pattern of the Hermite transforms. Densities decaying faster than
// any power get no extrapolation.
struct SeriesEstimate {
    double raw = 0.0;
    double extrapolated = 0.0;
    std::optional<double> exponent;
};

// Tail exponent gamma for the density, if it has power-law tails.
std::optional<double> series_tail_exponent(const SpectralDensity& m);

SeriesEstimate series_covariance_estimate(const ProcessModel& model, double t, double s);

// Var X(t) from the chaos coefficients, extrapolated in K.
double series_variance(const ProcessModel& model, double t);

// Realizations X(t_i; omega_j) = sum_k z_jk c_k(t_i), z_j from stream j of seed.
struct PathSet {
    std::vector<double> times;
    std::size_t paths = 0;
    std::vector<double> values;  // times.size() x paths, row-major

    double at(std::size_t i, std::size_t j) const { return values[i * paths + j]; }
};

PathSet sample_paths(const ProcessModel& model, std::span<const double> times, std::size_t n_paths,
                     std::uint64_t seed);

// Header "t,path_0,...", preceded by any comment lines given.
void write_paths_csv(std::ostream& os, const PathSet& paths, std::span<const std::string> comments = {});

// ||(X(t+h) - X(t))/h - W(t)||'_{N+3}.
double derivative_check(const ProcessModel& model, double t, double h);

// Lipschitz constants L_k = sup_grid |w'_k| for k <= k_max, their fit
// L_k <= C1 k^{(N+2)/2} + C2, and two constants for
// ||W(t) - W(s)||'_{N+3} <= C |t - s|:
//   series_CN: sum_k (C1 k^{(N+2)/2} + C2)(2k)^{-N-3}
//   norm_CN:  (sum_{k <= K} L_k^2 (2k)^{-(N+3)})^{1/2}, the bound implied
//             by the dual-norm definition for the truncated model.
struct LipschitzFit {
    std::vector<double> L;       // L[k-1]
    double exponent_fit = 0.0;   // slope of log L_k vs log k
    double exponent_bound = 0.0; // (N+2)/2
    double C1 = 0.0;
    double C2 = 0.0;
    double series_CN = 0.0;
    double norm_CN = 0.0;
};

LipschitzFit fit_lipschitz(const ProcessModel& model, std::size_t k_max = 50);

}  // namespace wickito
