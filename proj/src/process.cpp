#include "wickito/process.hpp"

#include "wickito/errors.hpp"
#include "wickito/kernels.hpp"
#include "wickito/random.hpp"

#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <limits>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace wickito {

namespace {

constexpr char kCacheMagic[4] = {'W', 'K', 'C', 'T'};
constexpr std::uint32_t kCacheVersion = 1;

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string grid_string(const TimeGrid& g) {
    std::ostringstream os;
    os << std::setprecision(17) << g.t_min << ":" << g.t_max << ":" << g.intervals;
    return os.str();
}

}  // namespace

bool TimeGrid::contains(double t) const {
    const double slack = 1e-12 * std::max(1.0, std::abs(t_max - t_min));
    return t >= t_min - slack && t <= t_max + slack;
}

ProcessModel::ProcessModel(SpectralDensity density, ProcessSettings settings)
    : density_(std::move(density)), settings_(std::move(settings)) {
    const auto& g = settings_.grid;
    if (settings_.modes == 0) throw ParameterError("ProcessModel: need at least one mode");
    if (g.intervals < 2 || !(g.t_max > g.t_min)) throw ParameterError("ProcessModel: bad time grid");
    nodes_ = build_spectral_nodes(density_, settings_.modes, settings_.quadrature);

    std::string cache_path;
    if (const char* dir = std::getenv("WICKITO_CACHE_DIR");
        settings_.use_cache && dir && *dir && !density_.descriptor().starts_with("custom")) {
        cache_path = (std::filesystem::path(dir) / ("coeffs-v1-" + table_key() + ".bin")).string();
        from_cache_ = load_cache(cache_path);
    }
    if (!from_cache_) {
        build_tables();
        if (!cache_path.empty()) store_cache(cache_path);
    }

    // slopes of w' by central differences
    const std::size_t K = modes();
    const std::size_t T = g.size();
    const double h = g.step();
    ddw_.assign(T * K, 0.0);
    for (std::size_t i = 0; i < T; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == T ? i : i + 1;
        const double span = h * static_cast<double>(hi - lo);
        for (std::size_t k = 0; k < K; ++k) ddw_[i * K + k] = (dw_[hi * K + k] - dw_[lo * K + k]) / span;
    }
}

void ProcessModel::build_tables() {
    const std::size_t K = modes();
    const std::size_t T = grid().size();
    std::vector<double> times(T);
    for (std::size_t i = 0; i < T; ++i) times[i] = grid().node(i);
    c_.assign(T * K, 0.0);
    w_.assign(T * K, 0.0);
    dw_.assign(T * K, 0.0);
    kernels::omp::spectral_rows(nodes_, times, c_, w_, dw_);
}

std::string ProcessModel::table_key() const {
    std::ostringstream key;
    key << "v" << kCacheVersion << "|" << density_.descriptor() << "|K=" << modes() << "|grid=" << grid_string(grid())
        << "|" << settings_.quadrature.describe();
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << fnv1a(key.str());
    return hex.str();
}

bool ProcessModel::load_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    char magic[4];
    std::uint32_t version = 0;
    std::uint64_t K = 0;
    std::uint64_t T = 0;
    std::uint64_t key_len = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&K), sizeof K);
    in.read(reinterpret_cast<char*>(&T), sizeof T);
    in.read(reinterpret_cast<char*>(&key_len), sizeof key_len);
    if (!in || std::memcmp(magic, kCacheMagic, 4) != 0 || version != kCacheVersion || K != modes() ||
        T != grid().size() || key_len > 4096)
        return false;
    std::string key(key_len, '\0');
    in.read(key.data(), static_cast<std::streamsize>(key_len));
    if (!in || key != table_key()) return false;
    std::vector<double> c(K * T), w(K * T), dw(K * T);
    for (auto* v : {&c, &w, &dw}) in.read(reinterpret_cast<char*>(v->data()), static_cast<std::streamsize>(v->size() * sizeof(double)));
    if (!in) return false;
    c_ = std::move(c);
    w_ = std::move(w);
    dw_ = std::move(dw);
    return true;
}

void ProcessModel::store_cache(const std::string& path) const {
    std::error_code ec;
    std::filesystem::create_directories(std::filesystem::path(path).parent_path(), ec);
    const std::string tmp = path + ".tmp" + std::to_string(fnv1a(path) ^ reinterpret_cast<std::uintptr_t>(this));
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) return;
        const std::uint64_t K = modes();
        const std::uint64_t T = grid().size();
        const std::string key = table_key();
        const std::uint64_t key_len = key.size();
        out.write(kCacheMagic, 4);
        out.write(reinterpret_cast<const char*>(&kCacheVersion), sizeof kCacheVersion);
        out.write(reinterpret_cast<const char*>(&K), sizeof K);
        out.write(reinterpret_cast<const char*>(&T), sizeof T);
        out.write(reinterpret_cast<const char*>(&key_len), sizeof key_len);
        out.write(key.data(), static_cast<std::streamsize>(key.size()));
        for (const auto* v : {&c_, &w_, &dw_})
            out.write(reinterpret_cast<const char*>(v->data()), static_cast<std::streamsize>(v->size() * sizeof(double)));
        if (!out) return;
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) std::filesystem::remove(tmp, ec);
}

void ProcessModel::interpolate(const std::vector<double>& y, const std::vector<double>& slope, double t,
                               std::span<double> out) const {
    const std::size_t K = modes();
    if (out.size() != K) throw ParameterError("ProcessModel: output span has wrong size");
    const auto& g = grid();
    if (!g.contains(t)) {
        std::ostringstream msg;
        msg << "t = " << t << " outside the coefficient grid [" << g.t_min << ", " << g.t_max << "]";
        throw RangeError(msg.str());
    }
    const double h = g.step();
    const double x = std::clamp((t - g.t_min) / h, 0.0, static_cast<double>(g.intervals));
    auto i = static_cast<std::size_t>(std::floor(x));
    if (i >= g.intervals) i = g.intervals - 1;
    const double s = x - static_cast<double>(i);
    const double* y0 = y.data() + i * K;
    const double* y1 = y0 + K;
    const double* m0 = slope.data() + i * K;
    const double* m1 = m0 + K;
    if (s == 0.0) {
        std::copy(y0, y0 + K, out.begin());
        return;
    }
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = (s3 - 2 * s2 + s) * h;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = (s3 - s2) * h;
    for (std::size_t k = 0; k < K; ++k) out[k] = h00 * y0[k] + h10 * m0[k] + h01 * y1[k] + h11 * m1[k];
}

void ProcessModel::c_at(double t, std::span<double> out) const { interpolate(c_, w_, t, out); }
void ProcessModel::w_at(double t, std::span<double> out) const { interpolate(w_, dw_, t, out); }
void ProcessModel::dw_at(double t, std::span<double> out) const { interpolate(dw_, ddw_, t, out); }

std::vector<double> ProcessModel::c(double t) const {
    std::vector<double> v(modes());
    c_at(t, v);
    return v;
}

std::vector<double> ProcessModel::w(double t) const {
    std::vector<double> v(modes());
    w_at(t, v);
    return v;
}

std::span<const double> ProcessModel::c_row(std::size_t i) const { return {c_.data() + i * modes(), modes()}; }
std::span<const double> ProcessModel::w_row(std::size_t i) const { return {w_.data() + i * modes(), modes()}; }
std::span<const double> ProcessModel::dw_row(std::size_t i) const { return {dw_.data() + i * modes(), modes()}; }

void ProcessModel::coefficients_direct(double t, std::span<double> c, std::span<double> w,
                                       std::span<double> dw) const {
    const double times[1] = {t};
    kernels::serial::spectral_rows(nodes_, times, c, w, dw);
}

// ---------------------------------------------------------------------------

ChaosVector X_chaos(const ProcessModel& model, double t) { return ChaosVector::first_order(model.c(t)); }

ChaosVector W_chaos(const ProcessModel& model, double t) { return ChaosVector::first_order(model.w(t)); }

double covariance(const ProcessModel& model, double t, double s) {
    return covariance_quadrature(t, s, model.density());
}

double series_covariance(const ProcessModel& model, double t, double s, std::size_t modes) {
    if (modes == 0) modes = model.modes();
    if (modes > model.modes()) throw ParameterError("series_covariance: more modes than the model has");
    const auto ct = model.c(t);
    const auto cs = model.c(s);
    double sum = 0.0;
    for (std::size_t k = 0; k < modes; ++k) sum += ct[k] * cs[k];
    return sum;
}

std::optional<double> series_tail_exponent(const SpectralDensity& m) {
    std::optional<double> gamma;
    const auto& a = m.asymptotics();
    if (a.high_exponent) gamma = 0.5 * (1.0 - *a.high_exponent);
    const double e0 = a.low_exponent;
    if (!(e0 >= 0.0 && std::floor(e0) == e0 && std::fmod(e0, 2.0) == 0.0)) {
        const double g0 = 0.5 * (1.0 + e0);
        gamma = gamma ? std::min(*gamma, g0) : g0;
    }
    return gamma;
}

SeriesEstimate series_covariance_estimate(const ProcessModel& model, double t, double s) {
    const auto ct = model.c(t);
    const auto cs = model.c(s);
    const std::size_t K = model.modes();
    std::vector<double> partial(K + 1, 0.0);
    for (std::size_t k = 0; k < K; ++k) partial[k + 1] = partial[k] + ct[k] * cs[k];
    SeriesEstimate est;
    est.raw = partial[K];
    est.extrapolated = est.raw;
    est.exponent = series_tail_exponent(model.density());
    if (!est.exponent || K < 32) return est;
    // least squares for S_K = S - A K^{-gamma}
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = ((K / 4 + 3) / 4) * 4; k <= K; k += 4) {
        const double x = std::pow(static_cast<double>(k), -*est.exponent);
        n += 1;
        sx += x;
        sy += partial[k];
        sxx += x * x;
        sxy += x * partial[k];
    }
    const double det = n * sxx - sx * sx;
    if (n < 3 || det == 0.0) return est;
    est.extrapolated = (sy * sxx - sx * sxy) / det;
    return est;
}

double series_variance(const ProcessModel& model, double t) {
    return series_covariance_estimate(model, t, t).extrapolated;
}

PathSet sample_paths(const ProcessModel& model, std::span<const double> times, std::size_t n_paths,
                     std::uint64_t seed) {
    if (n_paths == 0) throw ParameterError("sample_paths: need at least one path");
    const std::size_t K = model.modes();
    const std::size_t T = times.size();
    std::vector<double> coeff(T * K);
    for (std::size_t i = 0; i < T; ++i) model.c_at(times[i], {coeff.data() + i * K, K});
    std::vector<double> z(n_paths * K);
    for (std::size_t j = 0; j < n_paths; ++j) fill_normal(seed, j, {z.data() + j * K, K});
    PathSet ps;
    ps.times.assign(times.begin(), times.end());
    ps.paths = n_paths;
    ps.values.assign(T * n_paths, 0.0);
    kernels::omp::synthesize_paths(coeff, T, K, z, n_paths, ps.values);
    return ps;
}

void write_paths_csv(std::ostream& os, const PathSet& paths, std::span<const std::string> comments) {
    for (const auto& c : comments) os << "# " << c << "\n";
    os << "t";
    for (std::size_t j = 0; j < paths.paths; ++j) os << ",path_" << j;
    os << "\n";
    std::ostringstream row;
    row << std::setprecision(17);
    for (std::size_t i = 0; i < paths.times.size(); ++i) {
        row.str("");
        row << paths.times[i];
        for (std::size_t j = 0; j < paths.paths; ++j) row << "," << paths.at(i, j);
        os << row.str() << "\n";
    }
}

double derivative_check(const ProcessModel& model, double t, double h) {
    if (!(h > 0.0)) throw ParameterError("derivative_check: h must be positive");
    const auto c1 = model.c(t + h);
    const auto c0 = model.c(t);
    const auto w = model.w(t);
    const int p = model.dual_index();
    double s = 0.0;
    for (std::size_t k = 0; k < c0.size(); ++k) {
        const double d = (c1[k] - c0[k]) / h - w[k];
        s += d * d * std::pow(2.0 * static_cast<double>(k + 1), -p);
    }
    return std::sqrt(s);
}

LipschitzFit fit_lipschitz(const ProcessModel& model, std::size_t k_max) {
    const std::size_t K = model.modes();
    k_max = std::min(k_max, K);
    if (k_max < 3) throw ParameterError("fit_lipschitz: need at least three modes");
    std::vector<double> L(K, 0.0);
    for (std::size_t i = 0; i < model.grid().size(); ++i) {
        const auto row = model.dw_row(i);
        for (std::size_t k = 0; k < K; ++k) L[k] = std::max(L[k], std::abs(row[k]));
    }

    LipschitzFit fit;
    fit.L.assign(L.begin(), L.begin() + static_cast<std::ptrdiff_t>(k_max));
    const int N = model.N();
    fit.exponent_bound = 0.5 * (N + 2);

    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        const double x = std::log(static_cast<double>(k));
        const double y = std::log(fit.L[k - 1]);
        n += 1, sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    fit.exponent_fit = (n * sxy - sx * sy) / (n * sxx - sx * sx);

    // C1, C2 by least squares on L_k = C1 k^e + C2, then C2 raised so the
    // bound holds for every fitted k.
    n = sx = sy = sxx = sxy = 0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        const double x = std::pow(static_cast<double>(k), fit.exponent_bound);
        n += 1, sx += x, sy += fit.L[k - 1], sxx += x * x, sxy += x * fit.L[k - 1];
    }
    fit.C1 = std::max(0.0, (n * sxy - sx * sy) / (n * sxx - sx * sx));
    fit.C2 = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= k_max; ++k)
        fit.C2 = std::max(fit.C2, fit.L[k - 1] - fit.C1 * std::pow(static_cast<double>(k), fit.exponent_bound));
    fit.C2 = std::max(fit.C2, 0.0);

    const double q = N + 3.0;
    fit.series_CN = std::pow(2.0, -q) * (fit.C1 * gsl_sf_zeta(q - fit.exponent_bound) + fit.C2 * gsl_sf_zeta(q));
    double s = 0.0;
    for (std::size_t k = 1; k <= K; ++k) s += L[k - 1] * L[k - 1] * std::pow(2.0 * static_cast<double>(k), -q);
    fit.norm_CN = std::sqrt(s);
    return fit;
}

}  // namespace wickito
