#include "support.hpp"
#include "wickito/errors.hpp"
#include "wickito/ito.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace wickito;

namespace {
const ProcessModel& white40() {
    static const ProcessModel m(presets::white(), with_modes(40));
    return m;
}
const ProcessModel& fbm_model(double H) {
    static const ProcessModel m3(presets::fbm(0.3), with_modes(40));
    static const ProcessModel m6(presets::fbm(0.6), with_modes(40));
    return H < 0.5 ? m3 : m6;
}
}  // namespace

TEST(GaussianFunction, MonomialMoments) {
    const auto f = GaussianFunction::monomial(4);
    // E[Z^4] = 3 v^2, E[12 Z^2] = 12 v, E[24 Z] = 0, E[24] = 24
    EXPECT_DOUBLE_EQ(f.moment(0, 2.0), 12.0);
    EXPECT_DOUBLE_EQ(f.moment(2, 2.0), 24.0);
    EXPECT_DOUBLE_EQ(f.moment(3, 2.0), 0.0);
    EXPECT_DOUBLE_EQ(f.moment(4, 2.0), 24.0);
    EXPECT_DOUBLE_EQ(f.moment(5, 2.0), 0.0);
    EXPECT_DOUBLE_EQ(f.fn.d2f(1.5), 27.0);
}

TEST(GaussianFunction, TrigMoments) {
    const auto c = GaussianFunction::cosine(2.0);
    const auto s = GaussianFunction::sine(2.0);
    const double g = std::exp(-0.5 * 4.0 * 0.3);
    EXPECT_NEAR(c.moment(0, 0.3), g, 1e-15);
    EXPECT_NEAR(c.moment(2, 0.3), -4.0 * g, 1e-15);
    EXPECT_NEAR(s.moment(1, 0.3), 2.0 * g, 1e-15);
    EXPECT_NEAR(s.moment(3, 0.3), -8.0 * g, 1e-15);
    EXPECT_EQ(s.moment(2, 0.3), 0.0);
}

TEST(GaussianFunction, Parse) {
    EXPECT_EQ(parse_function("x").degree.value(), 1u);
    EXPECT_EQ(parse_function("x2").degree.value(), 2u);
    EXPECT_EQ(parse_function("x^3").degree.value(), 3u);
    EXPECT_FALSE(parse_function("cos").degree.has_value());
    EXPECT_NEAR(parse_function("sin:0.5").fn.f(1.0), std::sin(0.5), 1e-16);
    EXPECT_THROW(parse_function("tan"), ParameterError);
    EXPECT_THROW(parse_function("x^0"), ParameterError);
    EXPECT_THROW(parse_function("cos:abc"), ParameterError);
}

TEST(DefaultT0, SingularOnlyForRoughFbm) {
    EXPECT_EQ(default_t0(presets::white()), 0.0);
    EXPECT_EQ(default_t0(presets::fbm(0.3)), 0.01);
}

TEST(ItoExact, LinearHasNoCorrection) {
    const auto r = ito_polynomial(white40(), 1, {});
    EXPECT_LT(r.residual, 1e-12);
    EXPECT_TRUE(r.correction.empty());
}

TEST(ItoExact, SquareOfBrownianMotion) {
    ItoOptions o;
    o.n_steps = 256;
    const auto r = ito_polynomial(white40(), 2, o);
    EXPECT_LT(r.residual, 1e-10);
    EXPECT_NEAR(r.correction.constant_term(), 1.0, 1e-10);
    EXPECT_NEAR(r.residual_without_correction, 1.0, 1e-9);
    EXPECT_GT(r.riemann_residual, r.residual);
    EXPECT_EQ(r.tail_bound, 0.0);
}

TEST(ItoExact, HigherPowersAndFbm) {
    ItoOptions o;
    o.n_steps = 128;
    o.modes = 10;
    for (unsigned d : {3u, 4u}) EXPECT_LT(ito_polynomial(white40(), d, o).residual, 1e-9) << d;
    // r'(t) ~ t^{0.2} near 0 limits the panel rule
    const auto r = ito_polynomial(fbm_model(0.6), 2, o);
    EXPECT_LT(r.residual, 1e-4);
    EXPECT_NEAR(r.correction.constant_term(), hurst_constant(0.6), 1e-4);
}

TEST(ItoExact, SeriesVarianceMatchesTruncatedModel) {
    ItoOptions o;
    o.n_steps = 128;
    o.variance = VarianceSource::series;
    const auto r = ito_polynomial(white40(), 2, o);
    EXPECT_LT(r.residual, 1e-10);
    double v = 0.0;
    for (double c : white40().c(1.0)) v += c * c;
    EXPECT_NEAR(r.correction.constant_term(), v, 1e-10);
}

TEST(ItoExact, SingularStartThrows) {
    ItoOptions o;
    o.t0 = 0.0;
    EXPECT_THROW(ito_polynomial(fbm_model(0.3), 2, o), DomainError);
    EXPECT_THROW(ito_polynomial(white40(), 5, {}), ParameterError);
    EXPECT_THROW(ito_polynomial(white40(), 0, {}), ParameterError);
}

TEST(ItoExponential, ResidualAndRepresentation) {
    ItoOptions o;
    o.n_steps = 32;
    o.modes = 4;
    o.max_order = 10;
    const auto r = ito_exponential(white40(), 1.0, o);
    EXPECT_LT(r.residual, 1e-9);
    EXPECT_LT(r.representation_gap, 1e-14);
    EXPECT_NEAR(r.constant_term, std::exp(-0.5), 1e-10);
    EXPECT_NEAR(r.characteristic, std::exp(-0.5), 1e-10);
    EXPECT_LT(r.tail_bound, 1e-6);
}

TEST(ItoExponential, LowOrderCapIsAnAccuracyError) {
    ItoOptions o;
    o.n_steps = 8;
    o.modes = 3;
    o.max_order = 3;
    EXPECT_THROW(ito_exponential(white40(), 3.0, o), AccuracyError);
}

TEST(ItoPathwise, LinearIsExact) {
    const auto r = ito_pathwise(white40(), GaussianFunction::monomial(1).fn, 0.0, 1.0, 64, 200, 5);
    EXPECT_LT(r.mc_max_abs_residual, 1e-13);
}

TEST(ItoPathwise, SquareMatchesCorrection) {
    const auto r = ito_pathwise(white40(), GaussianFunction::monomial(2).fn, 0.0, 1.0, 256, 2000, 5);
    EXPECT_LT(std::abs(r.mc_residual.mean), 3.0 * r.mc_residual.std_error + 1e-12);
    double v = 0.0;
    for (double c : white40().c(1.0)) v += c * c;
    EXPECT_NEAR(r.mc_correction.mean, v, 1e-12);
}

TEST(ItoPathwise, Deterministic) {
    const auto f = GaussianFunction::cosine(1.0).fn;
    const auto a = ito_pathwise(white40(), f, 0.0, 1.0, 32, 100, 11);
    const auto b = ito_pathwise(white40(), f, 0.0, 1.0, 32, 100, 11);
    EXPECT_EQ(a.mc_residual.mean, b.mc_residual.mean);
    EXPECT_EQ(a.mc_lhs.std_error, b.mc_lhs.std_error);
}
