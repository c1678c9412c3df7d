#include <gtest/gtest.h>

#include <cmath>

#include "ixs/heat.hpp"

using namespace ixs;

TEST(Heat, KontorovichLebedevSymmetricPositive)
{
    SpectralEngine eng(TransformFamily::kl(), 0.5);
    for (double x : {0.5, 1.0, 3.0})
        for (double y : {0.7, 2.0}) {
            double a = eng.heat(1.0, x, y), b = eng.heat(1.0, y, x);
            EXPECT_GT(a, 0.0);
            EXPECT_NEAR(a, b, 1e-13 * a);
        }
}

TEST(Heat, MehlerFockHalfOrderClosedForm)
{
    SpectralEngine eng(TransformFamily::mf(0.5), 0.3);
    for (double t : {0.3, 1.0, 2.0}) {
        double x = std::cosh(1.0), y = std::cosh(1.5);
        double c = mf_half_closed_form(t, x, y);
        EXPECT_NEAR(eng.heat(t, x, y), c, 1e-9 * c);
    }
}

TEST(Heat, MehlerFockZeroOrderConservesMass)
{
    SpectralEngine eng(TransformFamily::mf(0.0), 0.5);
    EXPECT_NEAR(heat_mass(eng, 1.0, 2.0), 1.0, 1e-8);
}

TEST(Heat, KilledFamiliesLoseMass)
{
    SpectralEngine eng(TransformFamily::kl(), 0.5);
    double m = heat_mass(eng, 1.0, 1.0);
    EXPECT_GT(m, 0.0);
    EXPECT_LT(m, 1.0);
}

TEST(Heat, ChapmanKolmogorov)
{
    SpectralEngine eng(TransformFamily::mf(0.3), 0.3);
    EXPECT_LT(chapman_kolmogorov_residual(eng, 0.3, 0.7, 2.0, 3.0), 1e-8);
}

TEST(Heat, PdeResidual)
{
    SpectralEngine eng(TransformFamily::kl(), 0.3);
    EXPECT_LT(pde_residual(eng, 1.0, 1.0, 2.0), 1e-4);
}

TEST(Heat, ResolventMatchesLaplaceTransform)
{
    LaplaceCheck c = resolvent_laplace_check(TransformFamily::kl(), -1.0, 0.5, 3.0);
    EXPECT_TRUE(c.quad.converged);
    EXPECT_LT(c.rel_error(), 1e-6);
}

TEST(Heat, MonotoneInMu)
{
    EXPECT_GE(monotonicity_gap(TransformFamily::mf(0.0), TransformFamily::mf(0.5), 1.0, 2.0, 2.5), -1e-8);
    EXPECT_THROW(monotonicity_gap(TransformFamily::mf(0.5), TransformFamily::mf(0.0), 1.0, 2.0, 2.5),
                 std::invalid_argument);
}

TEST(Heat, LebesgueMeasureScalesByWeight)
{
    TransformFamily fam = TransformFamily::kl();
    SpectralEngine eng(fam, 1.0);
    double wr = eng.heat({fam, 1.0, Measure::WrtR}, 1.0, 2.0);
    double wl = eng.heat({fam, 1.0, Measure::WrtLebesgue}, 1.0, 2.0);
    EXPECT_NEAR(wl, wr * operator_weight(fam, 2.0), 1e-14);
}

TEST(Heat, RejectsTimeBelowEngineMinimum)
{
    SpectralEngine eng(TransformFamily::kl(), 0.5);
    EXPECT_THROW(eng.heat(0.1, 1.0, 1.0), std::domain_error);
}
