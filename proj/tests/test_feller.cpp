#include <gtest/gtest.h>

#include <cmath>

#include "ixs/expr.hpp"
#include "ixs/feller.hpp"

using namespace ixs;

namespace {

BoundaryClass cls(const SLOperator& op, Endpoint e, double anchor)
{
    return classify(op, e, anchor).classification;
}

}

TEST(Feller, BuiltinClassifications)
{
    for (double c : {1.0, 2.0}) {
        EXPECT_EQ(cls(builtin_operator("kl"), Endpoint::A, c), BoundaryClass::Natural);
        EXPECT_EQ(cls(builtin_operator("kl"), Endpoint::B, c), BoundaryClass::Natural);
        EXPECT_EQ(cls(builtin_operator("iw:-0.5"), Endpoint::A, c), BoundaryClass::Natural);
        EXPECT_EQ(cls(builtin_operator("iw:-0.5"), Endpoint::B, c), BoundaryClass::Natural);
    }
    for (double c : {2.0, 3.0}) {
        EXPECT_EQ(cls(builtin_operator("mf:0"), Endpoint::A, c), BoundaryClass::Entrance);
        EXPECT_EQ(cls(builtin_operator("mf:0.5"), Endpoint::A, c), BoundaryClass::Natural);
        EXPECT_EQ(cls(builtin_operator("mf:0.5"), Endpoint::B, c), BoundaryClass::Natural);
    }
}

TEST(Feller, BoundaryConditionsFollowClassification)
{
    auto r0 = classify(builtin_operator("mf:0"), Endpoint::A, 2.0);
    EXPECT_EQ(boundary_condition(r0, "(x^2-1)"), "lim_{x->1} (x^2-1) u'(x) = 0");
    auto r5 = classify(builtin_operator("mf:0.5"), Endpoint::A, 2.0);
    EXPECT_TRUE(r5.r_mass_finite);
    EXPECT_EQ(boundary_condition(r5, "(x^2-1)"), "lim_{x->1} (x^2-1) u'(x) = 0");
    auto rinf = classify(builtin_operator("mf:0.5"), Endpoint::B, 2.0);
    EXPECT_EQ(rinf.condition, "no boundary condition");
}

TEST(Feller, BrownianMotionOnIntervalIsRegular)
{
    SLOperator op = operator_from_strings("1", "0", "1", 0.0, 1.0);
    auto r = classify(op, Endpoint::A, 0.5);
    EXPECT_EQ(r.classification, BoundaryClass::Regular);
    EXPECT_NEAR(r.I_value.value, 0.125, 1e-8);
    EXPECT_NE(r.condition.find("alpha_e in [0,1] free"), std::string::npos);
}

TEST(Feller, StrongKillingGivesExit)
{
    SLOperator op = operator_from_strings("1", "x^(-1.5)", "1", 0.0, 1.0);
    auto r = classify(op, Endpoint::A, 0.5);
    EXPECT_EQ(r.classification, BoundaryClass::Exit);
    EXPECT_EQ(r.condition, "lim_{x->0} u(x) = 0");
}

TEST(Feller, ImproperIntegralDecisions)
{
    EXPECT_EQ(improper_integral([](double x) { return std::exp(-x); }, inf, 0.0).status, Finiteness::Finite);
    EXPECT_EQ(improper_integral([](double x) { return 1.0 / x; }, 0.0, 1.0).status, Finiteness::Diverged);
    EXPECT_EQ(improper_integral([](double x) { return 1.0 / (x * x); }, 0.0, 1.0).status, Finiteness::Diverged);
    auto v = improper_integral([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    EXPECT_EQ(v.status, Finiteness::Finite);
    EXPECT_NEAR(v.value, 2.0, 1e-5);
}

TEST(Feller, UndecidedConditionThrows)
{
    BoundaryReport r;
    r.classification = BoundaryClass::Undecided;
    EXPECT_THROW(boundary_condition(r), std::invalid_argument);
}

TEST(Feller, DslOperatorMatchesBuiltin)
{
    SLOperator dsl = operator_from_strings("x^2-1", "0.25/(x^2-1)", "1", 1.0, inf);
    SLOperator bi = builtin_operator("mf:0.5");
    for (double x : {1.1, 2.0, 7.0}) {
        EXPECT_NEAR(dsl.p(x), bi.p(x), 1e-12);
        EXPECT_NEAR(dsl.q(x), bi.q(x), 1e-12);
        EXPECT_NEAR(dsl.dp(x), bi.dp(x), 1e-6);
    }
    EXPECT_EQ(cls(dsl, Endpoint::A, 2.0), BoundaryClass::Natural);
}

TEST(Feller, ExpressionParser)
{
    EXPECT_NEAR(Expr::parse("-x^2 + 2*exp(-x)/cosh(1e-1*x)")(1.5), -2.25 + 2.0 * std::exp(-1.5) / std::cosh(0.15),
                1e-14);
    EXPECT_NEAR(Expr::parse("2^3^2")(0.0), 512.0, 1e-12);
    EXPECT_NEAR(Expr::parse("a*x", {{"a", 3.0}})(2.0), 6.0, 1e-15);
    EXPECT_THROW(Expr::parse("x +"), ExprError);
    EXPECT_THROW(Expr::parse("foo(x)"), ExprError);
    EXPECT_THROW(builtin_operator("zz"), std::invalid_argument);
}

TEST(Feller, AnchorMustBeInterior)
{
    EXPECT_THROW(classify(builtin_operator("kl"), Endpoint::A, -1.0), std::domain_error);
}
