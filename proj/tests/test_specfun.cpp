#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "ixs/specfun.hpp"

using namespace ixs;

TEST(Specfun, LogGammaRealAxis)
{
    for (double x : {0.3, 1.0, 2.5, 10.0}) EXPECT_NEAR(log_gamma({x, 0.0}).real(), std::lgamma(x), 1e-13);
}

TEST(Specfun, GammaAbsSquaredReflection)
{
    double tau = 1.7;
    EXPECT_NEAR(gamma_abs2(0.5, tau), M_PI / std::cosh(M_PI * tau), 1e-13);
}

TEST(Specfun, BesselKImaginaryOrderZeroIndex)
{
    EXPECT_NEAR(bessel_k_im(0.0, 1.0), std::cyl_bessel_k(0.0, 1.0), 1e-12);
    EXPECT_NEAR(bessel_k_im(1e-4, 1.0), std::cyl_bessel_k(0.0, 1.0), 1e-8);
}

TEST(Specfun, BesselKImaginaryOrderAgainstIntegral)
{
    const double pts[4][2] = {{0.5, 0.1}, {0.5, 1.0}, {0.5, 7.0}, {3.0, 7.0}};
    for (const auto& p : pts) {
        double ref = bessel_k_im_direct(p[0], p[1]);
        EXPECT_NEAR(bessel_k_im(p[0], p[1]), ref, 1e-9 * std::fabs(ref)) << p[0] << " " << p[1];
    }
}

TEST(Specfun, WhittakerReducesToBessel)
{
    for (double tau : {0.5, 2.0})
        for (double x : {0.3, 2.0}) {
            double ref = std::sqrt(2.0 * x / M_PI) * bessel_k_im(tau, x);
            EXPECT_NEAR(whittaker_w_im(0.0, tau, 2.0 * x), ref, 1e-10 * std::fabs(ref));
        }
}

TEST(Specfun, WhittakerAgainstIntegral)
{
    for (double alpha : {-1.0, -0.5}) {
        double ref = whittaker_w_im_direct(alpha, 1.5, 3.0).real();
        EXPECT_NEAR(whittaker_w_im(alpha, 1.5, 3.0), ref, 1e-9 * std::fabs(ref));
    }
}

TEST(Specfun, LegendreHalfOrderElementary)
{
    for (double tau : {0.5, 2.0})
        for (double xi : {0.5, 2.0}) {
            double ref = std::sqrt(2.0 / (M_PI * std::sinh(xi))) * std::sin(tau * xi) / tau;
            EXPECT_NEAR(legendre_p_im(0.5, tau, std::cosh(xi)), ref, 1e-11);
        }
}

TEST(Specfun, LegendreAgainstIntegral)
{
    for (double mu : {0.0, 0.3})
        for (double x : {1.5, 4.0}) EXPECT_NEAR(legendre_p_im(mu, 2.0, x), legendre_p_im_direct(mu, 2.0, x), 1e-9);
}

TEST(Specfun, LegendreBatchMatchesScalar)
{
    std::vector<double> xs{1.1, 2.0, 10.0};
    auto row = legendre_p_im_many(0.3, 4.0, xs);
    for (size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(row[i], legendre_p_im(0.3, 4.0, xs[i]), 1e-9);
}

TEST(Specfun, BesselWronskian)
{
    for (double nu : {0.0, 0.7, 2.5})
        for (double x : {0.2, 3.0}) {
            double k = bessel_k(nu, x), i = bessel_i(nu, x);
            double dk = -bessel_k(nu + 1.0, x) + nu / x * k, di = bessel_i(nu + 1.0, x) + nu / x * i;
            EXPECT_NEAR(k * di - dk * i, 1.0 / x, 1e-12 / x);
        }
}

TEST(Specfun, RejectsOutOfDomain)
{
    EXPECT_THROW(legendre_p_im(0.3, 1.0, 0.5), std::domain_error);
}
