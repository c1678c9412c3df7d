#include <gtest/gtest.h>

#include <cmath>

#include "ixs/yor.hpp"

using namespace ixs;

TEST(Yor, ThetaRepresentationsAgree)
{
    for (double t : {0.5, 2.0})
        for (double x : {0.5, 2.0}) {
            double s = yor_theta(t, x), e = yor_theta(t, x, YorRepr::Elementary);
            EXPECT_NEAR(s, e, 1e-9 * std::fabs(s));
        }
}

TEST(Yor, ThetaIsHalfTheKontorovichLebedevIntegralAtHalfTime)
{
    for (double t : {0.5, 1.0})
        for (double x : {1.0, 2.0})
            EXPECT_NEAR(yor_theta(t, x), 0.5 * yor_generalized(TransformFamily::kl(), 0.5 * t, x),
                        1e-10 * yor_theta(t, x));
}

TEST(Yor, MehlerFockRepresentationsAgree)
{
    TransformFamily fam = TransformFamily::mf(0.3);
    for (double t : {0.5, 2.0})
        for (double x : {1.5, 3.0}) {
            double s = yor_generalized(fam, t, x), e = yor_generalized(fam, t, x, YorRepr::Elementary);
            EXPECT_NEAR(s, e, 1e-9 * std::fabs(s));
        }
}

TEST(Yor, IndexWhittakerAtZeroAlphaIsKontorovichLebedev)
{
    EXPECT_NEAR(yor_generalized(TransformFamily::iw(0.0), 1.0, 1.0), yor_generalized(TransformFamily::kl(), 1.0, 1.0),
                1e-12);
}

TEST(Yor, UnsupportedAndOutOfRange)
{
    EXPECT_THROW(yor_generalized(TransformFamily::iw(-0.5), 1.0, 1.0, YorRepr::Elementary),
                 UnsupportedRepresentation);
    EXPECT_THROW(yor_theta(0.01, 1.0, YorRepr::Elementary), NonConvergence);
    EXPECT_THROW(yor_theta(1.0, -1.0), std::domain_error);
}

TEST(Yor, HartmanWatsonIsAProbabilityDensity)
{
    HartmanWatsonMass m = hartman_watson_mass(1.0);
    EXPECT_NEAR(m.total, 1.0, 1e-6);
    EXPECT_GT(hartman_watson_density(1.0, 1.0), 0.0);
}

TEST(Yor, EvolutionEquation)
{
    SpectralEngine eng(TransformFamily::mf(0.3), 0.3);
    EXPECT_LT(evolution_residual(eng, 0.3, 0.7, 2.0), 1e-10);
}

TEST(Yor, BackwardEquation)
{
    SpectralEngine eng(TransformFamily::mf(0.3), 0.3);
    EXPECT_LT(yor_pde_residual(eng, 1.0, 2.0), 1e-4);
}
