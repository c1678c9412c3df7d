#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ixs/quad.hpp"

using namespace ixs;

TEST(Quad, FiniteInterval)
{
    auto r = integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 2.0, 1e-12);
}

TEST(Quad, SemiInfiniteExponential)
{
    QuadSpec s;
    s.decay = {DecayKind::Exponential, 1.0};
    auto r = integrate([](double x) { return std::exp(-x); }, 0.0, inf, s);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 1.0, 1e-10);
}

TEST(Quad, GaussianHalfLine)
{
    QuadSpec s;
    s.decay = {DecayKind::Gaussian, 1.0};
    auto r = integrate([](double x) { return std::exp(-x * x); }, 0.0, inf, s);
    EXPECT_NEAR(r.value, 0.5 * std::sqrt(M_PI), 1e-10);
    EXPECT_THROW(integrate([](double x) { return std::exp(-x * x); }, -inf, inf, s), std::domain_error);
}

TEST(Quad, EndpointSingularity)
{
    auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    EXPECT_NEAR(r.value, 2.0, 1e-9);
}

TEST(Quad, OscillatoryCosine)
{
    auto r = integrate_oscillatory([](double x) { return std::exp(-x); }, 0.0, inf, 5.0, Oscillator::Cos);
    EXPECT_NEAR(r.value, 1.0 / 26.0, 1e-11);
    auto s = integrate_oscillatory([](double x) { return std::exp(-x); }, 0.0, inf, 5.0, Oscillator::Sin);
    EXPECT_NEAR(s.value, 5.0 / 26.0, 1e-11);
}

TEST(Quad, LogspaceMatchesDirect)
{
    auto r = integrate_logspace([](double x) { return LogScaled::exp_of(-x * x); }, 0.0, inf);
    EXPECT_NEAR(r.value, 0.5 * std::sqrt(M_PI), 1e-10);
}

TEST(Quad, PanelRuleExactForPolynomials)
{
    PanelRule p = panel_rule(0.0, 2.0, 3);
    std::vector<double> v(p.size());
    for (size_t i = 0; i < p.size(); ++i) v[i] = std::pow(p.nodes[i], 7);
    EXPECT_NEAR(p.apply(v), 32.0, 1e-11);
    EXPECT_LT(std::fabs(p.error(v)), 1e-10);
}

TEST(Quad, PairwiseSumAccurate)
{
    std::vector<double> v(1000000, 0.1);
    EXPECT_NEAR(pairwise_sum(v.data(), v.size()), 100000.0, 1e-8);
}

TEST(Quad, SpectralTauMaxGrowsAsTShrinks)
{
    double a = spectral_tau_max(1.0, 1e-16), b = spectral_tau_max(0.1, 1e-16);
    EXPECT_GT(b, a);
    EXPECT_LT(std::exp(-a * a * 1.0), 1e-15);
}

TEST(Quad, RejectsBadSpec)
{
    QuadSpec s;
    s.rel_tol = -1.0;
    EXPECT_THROW(validate(s), std::invalid_argument);
}
