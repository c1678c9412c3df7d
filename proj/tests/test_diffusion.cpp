#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ixs/diffusion.hpp"

using namespace ixs;

TEST(Diffusion, GbmLogMomentsAndDistribution)
{
    const double x0 = 1.5, t = 0.8;
    const long n = 10000;
    PathBundle b = simulate_gbm_paths(x0, t, 4, n);
    std::vector<double> z(n);
    double mean = 0.0, var = 0.0;
    for (long p = 0; p < n; ++p) z[p] = std::log(b.at(p, 4));
    for (double v : z) mean += v;
    mean /= n;
    for (double v : z) var += (v - mean) * (v - mean);
    var /= n - 1;
    EXPECT_NEAR(mean, std::log(x0), 4.0 * std::sqrt(2.0 * t / n));
    EXPECT_NEAR(var, 2.0 * t, 4.0 * 2.0 * t * std::sqrt(2.0 / n));
    std::sort(z.begin(), z.end());
    double d = 0.0, s = std::sqrt(2.0 * t);
    for (long i = 0; i < n; ++i) {
        double cdf = 0.5 * std::erfc(-(z[i] - std::log(x0)) / (s * std::sqrt(2.0)));
        d = std::max({d, std::fabs(cdf - double(i) / n), std::fabs(cdf - double(i + 1) / n)});
    }
    EXPECT_LT(d, 1.63 / std::sqrt(double(n)));
}

TEST(Diffusion, SeedDeterminism)
{
    PathBundle a = simulate_legendre_paths(2.0, 0.5, 20, 50, 7), b = simulate_legendre_paths(2.0, 0.5, 20, 50, 7);
    PathBundle c = simulate_legendre_paths(2.0, 0.5, 20, 50, 8);
    EXPECT_EQ(a.x, b.x);
    EXPECT_NE(a.x, c.x);
}

TEST(Diffusion, LegendrePathsStayInDomain)
{
    PathBundle b = simulate_legendre_paths(1.05, 1.0, 100, 200);
    for (double v : b.x) EXPECT_GE(v, 1.0);
}

TEST(Diffusion, LegendreWeakOrderOne)
{
    const double x0 = 1.2, t = 0.5;
    SpectralEngine eng(TransformFamily::mf(0.0), t);
    auto psi = [](double y) { return std::exp(-y); };
    double ref = spectral_expectation(eng, psi, t, x0);
    std::vector<double> err;
    for (int steps : {2, 4, 8}) {
        auto run = mc_feynman_kac(TransformFamily::mf(0.0), psi, t, x0, 1000000, steps);
        err.push_back(run.estimate.mean - ref);
    }
    EXPECT_NEAR(err[0] / err[1], 2.0, 0.6);
    EXPECT_NEAR(err[1] / err[2], 2.0, 0.6);
}

TEST(Diffusion, FeynmanKacMatchesSpectralForKontorovichLebedev)
{
    SpectralEngine eng(TransformFamily::kl(), 0.5);
    auto psi = [](double y) { return std::exp(-y); };
    double ref = spectral_expectation(eng, psi, 0.5, 1.0);
    auto run = mc_feynman_kac(TransformFamily::kl(), psi, 0.5, 1.0, 20000, 200);
    EXPECT_LT(run.estimate.z_score(ref), 3.0);
}

TEST(Diffusion, BougerolIntegralLimits)
{
    EXPECT_NEAR(bougerol_integral(1.0, 1e-6), 1.0, 1e-9);
    EXPECT_LT(bougerol_integral(1.0, 2.0), bougerol_integral(1.0, 1.0));
}

TEST(Diffusion, ConditionalLaplaceIsAProbabilityTransform)
{
    EXPECT_NEAR(conditional_laplace_closed(1.0, 1e-4, 1e-4), 1.0, 1e-6);
    for (double y : {0.5, 1.0, 2.0, 3.0}) {
        double v = conditional_laplace_closed(1.0, 1.0, y);
        EXPECT_GT(v, 0.0);
        EXPECT_LE(v, 1.0);
    }
}

TEST(Diffusion, PathsCsvSchema)
{
    PathBundle b = simulate_gbm_paths(1.0, 1.0, 3, 150);
    std::stringstream ss;
    write_paths_csv(ss, b);
    std::string line;
    std::getline(ss, line);
    EXPECT_EQ(line, "path_id,t,x");
    long rows = 0;
    while (std::getline(ss, line)) ++rows;
    EXPECT_EQ(rows, 100 * 4);
}

TEST(Diffusion, RejectsBadArguments)
{
    EXPECT_THROW(simulate_legendre_paths(0.5, 1.0, 10, 10), std::domain_error);
    EXPECT_THROW(simulate_gbm_paths(1.0, 1.0, 0, 10), std::invalid_argument);
}
