#include "wickito/errors.hpp"
#include "wickito/hermite.hpp"
#include "wickito/spectral.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace wickito;

TEST(Presets, Values) {
    const auto w = presets::white();
    EXPECT_DOUBLE_EQ(w(3.0), 1.0 / (2.0 * std::numbers::pi));
    EXPECT_NEAR(w.symbol(0.4), 1.0, 1e-15);
    EXPECT_NEAR(presets::fbm(0.7)(2.0), 0.120616891943203, 1e-15);
    EXPECT_NEAR(presets::fbm(0.7)(-2.0), 0.120616891943203, 1e-15);
    EXPECT_NEAR(presets::quartic()(1.0), std::exp(-2.0), 1e-16);
    EXPECT_EQ(presets::fbm(0.3).bounds().N, 1);
    EXPECT_EQ(presets::fbm(0.7).bounds().N, 0);
    EXPECT_EQ(presets::quartic().bounds().N, 2);
}

TEST(Presets, GrowthBoundsHold) {
    for (const auto& m : {presets::white(), presets::fbm(0.3), presets::fbm(0.7), presets::quartic()})
        EXPECT_LE(m.growth_bound_ratio(), 1.0 + 1e-12) << m.descriptor();
}

TEST(Presets, SingularDerivative) {
    EXPECT_FALSE(presets::white().singular_derivative_at_zero());
    EXPECT_FALSE(presets::fbm(0.7).singular_derivative_at_zero());
    EXPECT_TRUE(presets::fbm(0.3).singular_derivative_at_zero());
    EXPECT_FALSE(presets::quartic().singular_derivative_at_zero());
}

TEST(Presets, Parse) {
    EXPECT_EQ(parse_preset("white").descriptor(), "white");
    EXPECT_EQ(parse_preset("fbm:H=0.3").hurst().value(), 0.3);
    EXPECT_EQ(parse_preset("fbm:0.6").hurst().value(), 0.6);
    EXPECT_EQ(parse_preset("quartic").descriptor(), "quartic");
    EXPECT_THROW(parse_preset("fbm:H=1.2"), ParameterError);
    EXPECT_THROW(parse_preset("fbm:H=abc"), ParameterError);
    EXPECT_THROW(parse_preset("pink"), ParameterError);
}

// Oracle: mpmath of Gamma(2-2H) cos(pi H) / (pi (1-2H) H).
TEST(HurstConstant, FrozenValues) {
    EXPECT_NEAR(hurst_constant(0.3), 1.38337632194588, 1e-13);
    EXPECT_NEAR(hurst_constant(0.6), 0.954310988531844, 1e-13);
    EXPECT_NEAR(hurst_constant(0.7), 0.995088135903925, 1e-13);
    EXPECT_NEAR(hurst_constant(0.5), 1.0, 1e-14);
    EXPECT_NEAR(hurst_constant(0.5 + 1e-9), 1.0, 1e-8);
    EXPECT_THROW(hurst_constant(1.0), ParameterError);
}

TEST(VarianceFunction, White) {
    const auto w = presets::white();
    for (double t : {1e-6, 0.01, 0.3, 1.0, 2.0}) EXPECT_NEAR(r_of_t(t, w), t, 1e-11 * (1 + t));
    EXPECT_EQ(r_of_t(0.0, w), 0.0);
    EXPECT_NEAR(r_of_t(-0.7, w), 0.7, 1e-12);
    EXPECT_NEAR(r_prime(0.7, w), 1.0, 1e-12);
    EXPECT_NEAR(r_prime(-0.7, w), -1.0, 1e-12);
}

TEST(VarianceFunction, FbmMatchesPowerLaw) {
    for (double H : {0.3, 0.7}) {
        const auto m = presets::fbm(H);
        const double V = hurst_constant(H);
        for (double t : {0.01, 0.5, 1.0, 2.0}) {
            EXPECT_NEAR(r_of_t(t, m) / (V * std::pow(t, 2 * H)), 1.0, 1e-10);
            EXPECT_NEAR(r_prime(t, m) / (2 * H * V * std::pow(t, 2 * H - 1)), 1.0, 1e-9);
        }
    }
    EXPECT_THROW(r_prime(1e-8, presets::fbm(0.3)), DomainError);
}

// Frozen from the quadrature; agrees with the derived closed form below.
TEST(VarianceFunction, Quartic) {
    const auto q = presets::quartic();
    EXPECT_NEAR(r_of_t(0.5, q), 0.0572412646927980, 1e-12);
    EXPECT_NEAR(r_of_t(1.0, q), 0.211889877102845, 1e-12);
    EXPECT_NEAR(r_of_t(2.0, q), 0.626657068657750, 1e-12);
    for (double t : {0.25, 1.0, 1.75}) EXPECT_NEAR(r_of_t(t, q), closed_form::quartic_variance(t), 1e-12);
    // the printed form is negative for t > 0
    EXPECT_LT(closed_form::quartic_r_printed(1.0), 0.0);
}

TEST(Covariance, WhiteIsMin) {
    const auto w = presets::white();
    EXPECT_NEAR(covariance_quadrature(0.5, 1.5, w), 0.5, 1e-11);
    EXPECT_NEAR(covariance_quadrature(2.0, 1.0, w), 1.0, 1e-11);
    EXPECT_NEAR(levy_khintchine_r(1.0, w), 0.5, 1e-12);
}

TEST(Covariance, FbmIsHalfThePrintedForm) {
    for (double H : {0.3, 0.7}) {
        const auto m = presets::fbm(H);
        EXPECT_NEAR(2.0 * covariance_quadrature(1.0, 0.5, m) / closed_form::fbm_covariance_printed(H, 1.0, 0.5), 1.0,
                    1e-10);
    }
}

TEST(ApplyTm, WhiteIsIdentity) {
    const auto f = SampledFunction::sample([](double t) { return std::exp(-t * t); }, -10.0, 10.0, 1024);
    const auto r = apply_Tm(f, presets::white());
    double err = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) err = std::max(err, std::abs(r.output.values[i] - f.values[i]));
    EXPECT_LT(err, 1e-13);
    EXPECT_LT(r.max_imag_residual, 1e-13);
}

TEST(ApplyTm, FftAgreesWithSpectralRoute) {
    const auto q = presets::quartic();
    const auto f = SampledFunction::sample([](double t) { return hermite_fn(3, t); }, -20.0, 20.0, 2048);
    const auto r = apply_Tm(f, q);
    const std::size_t i = 1059;  // t close to 0.7
    const double t = r.output.t(i);
    EXPECT_NEAR(r.output.values[i], Tm_hermite(t, 3, q), 1e-9);
    EXPECT_NEAR(Tm_hermite(0.7, 3, q), -0.12462219574387963, 1e-11);
}

TEST(ApplyTm, UnresolvedSpectrumThrows) {
    auto f = SampledFunction::sample([](double t) { return std::abs(t) < 0.5 ? 1.0 : 0.0; }, -4.0, 4.0, 64);
    EXPECT_THROW(apply_Tm(f, presets::white()), ResolutionError);
}

TEST(TmCoefficients, WhiteIsIndicatorProjection) {
    const auto w = presets::white();
    // Oracle: mpmath integrals of h~_k over [0, t].
    EXPECT_NEAR(Tm_indicator_coeff(1.0, 1, w), 0.64268133721747559, 1e-12);
    EXPECT_NEAR(Tm_indicator_coeff(1.0, 2, w), 0.41796356691372173, 1e-12);
    EXPECT_NEAR(Tm_indicator_coeff(0.5, 7, w), -0.11345360590811182, 1e-12);
    EXPECT_NEAR(Tm_hermite(1.2, 3, w), 0.48603031285335192, 1e-12);
}

TEST(TmCoefficients, Fbm) {
    // Oracle: mpmath of 2 int_0^inf sin(u)/u sqrt(m) h~_1 and 2 int_0^inf (1-cos u)/u sqrt(m) h~_2.
    const auto m = presets::fbm(0.7);
    EXPECT_NEAR(Tm_indicator_coeff(1.0, 1, m), 0.77477944790690342, 1e-11);
    EXPECT_NEAR(Tm_indicator_coeff(1.0, 2, m), 0.39684879350598719, 1e-11);
}

TEST(SampledFunction, CsvRoundTrip) {
    const auto f = SampledFunction::sample([](double t) { return std::sin(t); }, 0.0, 1.0, 11);
    std::stringstream ss;
    write_csv(ss, f);
    const auto g = read_csv(ss);
    ASSERT_EQ(g.size(), f.size());
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(g.values[i], f.values[i]);
    std::stringstream bad("t,value\n0,1\n0.1,2\n0.3,3\n");
    EXPECT_THROW(read_csv(bad), ParameterError);
}
