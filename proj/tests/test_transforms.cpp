#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ixs/transforms.hpp"

using namespace ixs;

TEST(Transforms, KontorovichLebedevRoundTrip)
{
    auto f = [](double y) { return y * std::exp(-y); };
    TransformEngine eng(TransformFamily::kl(), 0.0, 60.0);
    SpectralTable tab = eng.forward_table(f);
    for (double x : {0.3, 1.0, 2.5}) EXPECT_NEAR(eng.inverse(tab, x), f(x), 1e-5 * f(x));
}

TEST(Transforms, KontorovichLebedevParsevalQuarter)
{
    auto f = [](double y) { return y * std::exp(-y); };
    TransformEngine eng(TransformFamily::kl(), 0.0, 60.0);
    ParsevalGap g = parseval_gap(eng, f, 0.0, 60.0);
    EXPECT_NEAR(g.lhs, 0.25, 1e-12);
    EXPECT_LT(std::fabs(g.gap()), 1e-8);
}

TEST(Transforms, MehlerFockRoundTripAndParseval)
{
    auto f = [](double x) { return std::exp(-x); };
    TransformFamily fam = TransformFamily::mf(0.0);
    TransformEngine eng(fam, 1.0, 45.0);
    SpectralTable tab = eng.forward_table(f);
    for (double x : {1.5, 2.0, 4.0}) EXPECT_NEAR(eng.inverse(tab, x), f(x), 1e-8 * f(x));
    ParsevalGap g = parseval_gap(eng, f, 1.0, 45.0);
    EXPECT_LT(std::fabs(g.gap()) / g.lhs, 1e-8);
}

TEST(Transforms, MehlerFockNonzeroOrderParsevalWithTail)
{
    auto f = [](double x) { return std::exp(-x); };
    TransformEngine eng(TransformFamily::mf(0.3), 1.0, 45.0);
    ParsevalGap g = parseval_gap(eng, f, 1.0, 45.0);
    EXPECT_LT(std::fabs(g.gap()) / g.lhs, 1e-6);
}

TEST(Transforms, IndexWhittakerRoundTrip)
{
    auto f = [](double y) { return y * y * std::exp(-y); };
    TransformEngine eng(TransformFamily::iw(-0.5), 0.0, 60.0);
    SpectralTable tab = eng.forward_table(f);
    for (double x : {0.5, 2.0, 4.0}) EXPECT_NEAR(eng.inverse(tab, x), f(x), 1e-6 * f(x));
}

TEST(Transforms, SingleTauForwardMatchesTable)
{
    auto f = [](double y) { return y * std::exp(-y); };
    TransformFamily fam = TransformFamily::kl();
    TransformEngine eng(fam, 0.0, 60.0);
    SpectralTable tab = eng.forward_table(f);
    size_t i = tab.tau.size() / 3;
    double direct = forward(fam, f, tab.tau[i], 0.0, 60.0);
    EXPECT_NEAR(direct, tab.value(i), 1e-8 * std::max(1e-3, std::fabs(direct)));
}

TEST(Transforms, CsvIngestAndInterpolation)
{
    std::stringstream ss;
    ss << "x,f\n";
    for (int i = 0; i <= 400; ++i) {
        double x = 0.05 * i;
        ss << x << "," << x * std::exp(-x) << "\n";
    }
    GridFunction g = read_grid_csv(ss);
    EXPECT_EQ(g.size(), 401u);
    EXPECT_NEAR(g(1.234), 1.234 * std::exp(-1.234), 1e-5);
}

TEST(Transforms, CsvRejectsGarbage)
{
    std::stringstream ss("0,1\n1,abc\n");
    EXPECT_THROW(read_grid_csv(ss), std::invalid_argument);
}

TEST(Transforms, TableRejectedByForeignEngine)
{
    auto f = [](double y) { return y * std::exp(-y); };
    TransformEngine a(TransformFamily::kl(), 0.0, 60.0), b(TransformFamily::iw(-0.5), 0.0, 60.0);
    SpectralTable tab = a.forward_table(f);
    EXPECT_THROW(b.inverse(tab, 1.0), std::invalid_argument);
}
