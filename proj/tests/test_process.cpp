#include "support.hpp"
#include "wickito/errors.hpp"
#include "wickito/process.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

using namespace wickito;

namespace {
const ProcessModel& white_model() {
    static const ProcessModel m(presets::white(), with_modes(200));
    return m;
}
const ProcessModel& fbm07_model() {
    static const ProcessModel m(presets::fbm(0.7), with_modes(200));
    return m;
}
}  // namespace

TEST(ProcessModel, CoefficientOracles) {
    // mpmath oracles, as in test_spectral
    const auto c = white_model().c(1.0);
    EXPECT_NEAR(c[0], 0.64268133721747559, 1e-11);
    EXPECT_NEAR(c[1], 0.41796356691372173, 1e-11);
    const auto f = fbm07_model().c(1.0);
    EXPECT_NEAR(f[0], 0.77477944790690342, 1e-10);
    EXPECT_NEAR(f[1], 0.39684879350598719, 1e-10);
}

TEST(ProcessModel, InterpolationMatchesDirect) {
    const auto& m = fbm07_model();
    const double t = 0.73456;
    std::vector<double> c(m.modes()), w(m.modes()), dw(m.modes());
    m.coefficients_direct(t, c, w, dw);
    const auto ci = m.c(t);
    const auto wi = m.w(t);
    for (std::size_t k = 0; k < m.modes(); ++k) {
        EXPECT_NEAR(ci[k], c[k], 1e-10);
        EXPECT_NEAR(wi[k], w[k], 1e-8);
    }
}

TEST(ProcessModel, WhiteWIsHermiteFunction) {
    const auto w = white_model().w(1.2);
    EXPECT_NEAR(w[2], 0.48603031285335192, 1e-10);
}

TEST(ProcessModel, XAtZeroVanishes) {
    for (double c : white_model().c(0.0)) EXPECT_EQ(c, 0.0);
    EXPECT_TRUE(X_chaos(white_model(), 0.0).empty());
}

TEST(ProcessModel, OutOfGridThrows) {
    std::vector<double> c(white_model().modes());
    EXPECT_THROW(white_model().c_at(2.5, c), RangeError);
    EXPECT_THROW(white_model().c_at(-0.1, c), RangeError);
}

TEST(ProcessModel, CacheRoundTrip) {
    const auto dir = std::filesystem::temp_directory_path() / "wickito-cache-test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const char* old = std::getenv("WICKITO_CACHE_DIR");
    const std::string saved = old ? old : "";
    setenv("WICKITO_CACHE_DIR", dir.c_str(), 1);
    ProcessSettings s;
    s.modes = 24;
    s.grid = TimeGrid{0.0, 1.0, 64};
    const ProcessModel a(presets::quartic(), s);
    const ProcessModel b(presets::quartic(), s);
    EXPECT_FALSE(a.loaded_from_cache());
    EXPECT_TRUE(b.loaded_from_cache());
    EXPECT_EQ(a.table_key(), b.table_key());
    EXPECT_EQ(a.c(0.37), b.c(0.37));
    if (old) setenv("WICKITO_CACHE_DIR", saved.c_str(), 1);
    else unsetenv("WICKITO_CACHE_DIR");
    std::filesystem::remove_all(dir);
}

TEST(Covariance, QuadratureAndSeries) {
    const auto& m = white_model();
    EXPECT_NEAR(covariance(m, 0.5, 1.0), 0.5, 1e-10);
    // partial sums approach min(t, s) from below
    const double s50 = series_covariance(m, 1.0, 1.0, 50);
    const double s200 = series_covariance(m, 1.0, 1.0);
    EXPECT_LT(s50, s200);
    EXPECT_LT(s200, 1.0);
    // white tail decays like K^{-1/2}: about 4e-3 short at K = 200
    EXPECT_NEAR(series_variance(m, 1.0), 1.0, 6e-3);
}

TEST(Covariance, TailExponent) {
    EXPECT_NEAR(series_tail_exponent(presets::white()).value(), 0.5, 1e-15);
    EXPECT_FALSE(series_tail_exponent(presets::quartic()).has_value());
}

TEST(Paths, DeterministicAndStartAtZero) {
    const std::vector<double> times = {0.0, 0.25, 0.5, 1.0};
    const auto a = sample_paths(white_model(), times, 4, 9);
    const auto b = sample_paths(white_model(), times, 4, 9);
    EXPECT_EQ(a.values, b.values);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(a.at(0, j), 0.0);
    std::ostringstream os;
    const std::string comment = "hello";
    write_paths_csv(os, a, std::span<const std::string>(&comment, 1));
    EXPECT_EQ(os.str().substr(0, 28), "# hello\nt,path_0,path_1,path");
}

TEST(Paths, SampleVarianceNearR) {
    const std::vector<double> times = {1.0};
    const auto p = sample_paths(white_model(), times, 4000, 1);
    double s = 0.0;
    for (std::size_t j = 0; j < p.paths; ++j) s += p.at(0, j) * p.at(0, j);
    s /= static_cast<double>(p.paths);
    // Var of the sample second moment is 2 v^2 / n
    EXPECT_NEAR(s, series_covariance(white_model(), 1.0, 1.0), 4.0 * std::sqrt(2.0 / 4000.0));
}

TEST(Regularity, DerivativeErrorIsLinearInH) {
    const auto& m = white_model();
    const double e1 = derivative_check(m, 0.5, 0.1);
    const double e2 = derivative_check(m, 0.5, 0.05);
    EXPECT_NEAR(e2 / e1, 0.5, 0.1);
}

TEST(Regularity, LipschitzFit) {
    const auto fit = fit_lipschitz(white_model(), 50);
    ASSERT_EQ(fit.L.size(), 50u);
    EXPECT_NEAR(fit.exponent_bound, 1.0, 1e-15);
    EXPECT_LE(fit.exponent_fit, fit.exponent_bound + 0.1);
    for (std::size_t k = 1; k <= 50; ++k)
        EXPECT_LE(fit.L[k - 1], fit.C1 * std::pow(double(k), fit.exponent_bound) + fit.C2 + 1e-12);
    EXPECT_GT(fit.norm_CN, 0.0);
    // ||W(t+h) - W(t)||' <= norm_CN h on the truncated model
    const double h = 0.1;
    EXPECT_LE(derivative_check(white_model(), 0.5, h), fit.norm_CN * h);
}
