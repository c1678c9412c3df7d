#include "ixs/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <stdexcept>

#include "ixs/feller.hpp"
#include "ixs/heat.hpp"
#include "ixs/specfun.hpp"
#include "ixs/transforms.hpp"
#include "ixs/yor.hpp"

namespace ixs {

namespace {

using Fn = std::function<double(double)>;
using Results = std::vector<CheckResult>;

std::string fmt(const char* f, double a)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

CheckResult below(int c, std::string name, double measured, double tol, std::string detail = {})
{
    return {c, std::move(name), measured, tol, measured <= tol, std::move(detail)};
}

bool wants(const CheckOptions& opt, FamilyTag tag)
{
    return !opt.family || *opt.family == tag;
}

std::vector<TransformFamily> families(const CheckOptions& opt)
{
    std::vector<TransformFamily> out;
    if (wants(opt, FamilyTag::KontorovichLebedev)) out.push_back(TransformFamily::kl());
    if (wants(opt, FamilyTag::IndexWhittaker)) out.push_back(TransformFamily::iw(opt.alpha));
    if (wants(opt, FamilyTag::MehlerFock)) out.push_back(TransformFamily::mf(opt.mu));
    return out;
}

bool is_mf(const TransformFamily& fam)
{
    return fam.tag == FamilyTag::MehlerFock;
}

std::vector<double> space_points(const TransformFamily& fam)
{
    if (is_mf(fam)) return {1.2, 2.0, 3.0, 5.0};
    return {0.5, 1.0, 2.0, 4.0};
}

double anchor_x(const TransformFamily& fam)
{
    return is_mf(fam) ? 2.0 : 1.0;
}

double anchor_y(const TransformFamily& fam)
{
    return is_mf(fam) ? 3.0 : 2.0;
}

Results special_functions(const CheckOptions& opt)
{
    const std::vector<double> taus{0.25, 0.5, 1.0, 2.0, 4.0};
    const std::vector<double> xs{0.25, 0.5, 1.0, 2.0, 4.0};
    double w_err = 0.0;
    for (double tau : taus)
        for (double x : xs) {
            double ref = std::sqrt(2.0 * x / M_PI) * bessel_k_im(tau, x);
            w_err = std::max(w_err, std::fabs(whittaker_w_im(0.0, tau, 2.0 * x) - ref) / std::fabs(ref));
        }
    const std::vector<double> xis{0.25, 0.5, 1.0, 2.0, 3.0};
    double p_err = 0.0;
    for (double tau : taus)
        for (double xi : xis) {
            double ref = std::sqrt(2.0 / (M_PI * std::sinh(xi))) * std::sin(tau * xi) / tau;
            p_err = std::max(p_err, std::fabs(legendre_p_im(0.5, tau, std::cosh(xi)) - ref) / std::fabs(ref));
        }
    std::mt19937_64 gen(opt.seed);
    std::uniform_real_distribution<double> nu_dist(0.0, 3.0), x_dist(0.1, 10.0);
    double wr_err = 0.0;
    for (int i = 0; i < 20; ++i) {
        double nu = nu_dist(gen), x = x_dist(gen);
        double k = bessel_k(nu, x), i0 = bessel_i(nu, x);
        double dk = -bessel_k(nu + 1.0, x) + nu / x * k, di = bessel_i(nu + 1.0, x) + nu / x * i0;
        wr_err = std::max(wr_err, std::fabs(k * di - dk * i0 - 1.0 / x));
    }
    return {below(1, "whittaker_reduction_W0_vs_K", w_err, 1e-8, "max rel err on 5x5 (tau x) grid"),
            below(1, "legendre_half_order_reduction", p_err, 1e-8, "max rel err on 5x5 (tau xi) grid"),
            below(1, "bessel_IK_wronskian", wr_err, 1e-7, "max abs err at 20 seeded points")};
}

struct TestLibrary {
    TransformFamily family;
    double upper;
    std::vector<std::pair<std::string, Fn>> functions;
    std::vector<double> points;
};

std::vector<TestLibrary> test_libraries(const CheckOptions& opt)
{
    std::vector<TestLibrary> libs;
    const std::vector<double> half_line{0.2, 0.4, 0.6, 0.8, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> above_one{1.2, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0, 8.0};
    if (wants(opt, FamilyTag::KontorovichLebedev))
        libs.push_back({TransformFamily::kl(),
                        60.0,
                        {{"y*exp(-y)", [](double y) { return y * std::exp(-y); }},
                         {"y^2*exp(-y)", [](double y) { return y * y * std::exp(-y); }},
                         {"y*exp(-2y)", [](double y) { return y * std::exp(-2.0 * y); }},
                         {"y^1.5*exp(-y)", [](double y) { return std::pow(y, 1.5) * std::exp(-y); }},
                         {"y*exp(-y^2)", [](double y) { return y * std::exp(-y * y); }}},
                        half_line});
    if (wants(opt, FamilyTag::IndexWhittaker))
        libs.push_back({TransformFamily::iw(opt.alpha),
                        60.0,
                        {{"y*exp(-y)", [](double y) { return y * std::exp(-y); }},
                         {"y^2*exp(-y)", [](double y) { return y * y * std::exp(-y); }},
                         {"y*exp(-y/2)", [](double y) { return y * std::exp(-0.5 * y); }},
                         {"y^1.5*exp(-y)", [](double y) { return std::pow(y, 1.5) * std::exp(-y); }},
                         {"y^2.5*exp(-1.5y)", [](double y) { return std::pow(y, 2.5) * std::exp(-1.5 * y); }}},
                        half_line});
    if (wants(opt, FamilyTag::MehlerFock)) {
        for (double mu : {opt.mu, 0.0}) {
            if (mu == 0.0 && opt.mu == 0.0 && !libs.empty() && is_mf(libs.back().family)) continue;
            double h = 0.5 * mu;
            auto b = [h](double x) { return h == 0.0 ? 1.0 : std::pow(x * x - 1.0, h); };
            libs.push_back({TransformFamily::mf(mu),
                            45.0,
                            {{"b*exp(-x)", [b](double x) { return b(x) * std::exp(-x); }},
                             {"b*exp(-2x)", [b](double x) { return b(x) * std::exp(-2.0 * x); }},
                             {"b*x*exp(-x)", [b](double x) { return b(x) * x * std::exp(-x); }},
                             {"b*exp(-x)/x", [b](double x) { return b(x) * std::exp(-x) / x; }},
                             {"b*x^2*exp(-1.5x)", [b](double x) { return b(x) * x * x * std::exp(-1.5 * x); }}},
                            above_one});
        }
    }
    return libs;
}

Results transforms_suite(const CheckOptions& opt, bool roundtrip, bool parseval)
{
    Results out;
    for (auto& lib : test_libraries(opt)) {
        TransformEngine eng(lib.family, lib.family.lower(), lib.upper);
        double worst_rt = 0.0, worst_pg = 0.0, worst_tail = 0.0;
        std::string worst_rt_name, worst_pg_name;
        for (auto& [label, f] : lib.functions) {
            SpectralTable tab = eng.forward_table(f);
            if (roundtrip)
                for (double x : lib.points) {
                    double fx = f(x), e = std::fabs(eng.inverse(tab, x) - fx);
                    double r = std::fabs(fx) > 1e-2 ? e / std::fabs(fx) : e;
                    if (r > worst_rt) worst_rt = r, worst_rt_name = label;
                }
            if (parseval) {
                double tail = 0.0;
                double rhs = spectral_norm2(tab, &tail);
                double lhs = reference_norm2(lib.family, f, lib.family.lower(), lib.upper);
                double g = std::fabs(rhs - lhs) / lhs;
                worst_tail = std::max(worst_tail, tail);
                if (g >= worst_pg) worst_pg = g, worst_pg_name = label;
            }
        }
        std::string fam = lib.family.name();
        if (roundtrip)
            out.push_back(below(2, "roundtrip_" + fam, worst_rt, 1e-4,
                                "max err over 5 functions x 10 points; worst " + worst_rt_name));
        if (parseval)
            out.push_back(below(2, "parseval_" + fam, worst_pg, 1e-4,
                                "max rel gap over 5 functions; worst " + worst_pg_name +
                                    fmt("; tail correction up to %.3g", worst_tail)));
    }
    return out;
}

Results yor_suite(const CheckOptions& opt)
{
    const std::vector<double> ts{0.5, 1.0, 2.0};
    double theta_err = 0.0, half_err = 0.0, double_ratio = 0.0;
    for (double t : ts)
        for (double x : {0.5, 1.0, 2.0}) {
            double s = yor_theta(t, x), e = yor_theta(t, x, YorRepr::Elementary);
            double k = yor_generalized(TransformFamily::kl(), t / 2.0, x);
            theta_err = std::max(theta_err, std::fabs(s - e) / std::fabs(s));
            half_err = std::max(half_err, std::fabs(s - 0.5 * k) / std::fabs(s));
            double_ratio = std::max(double_ratio, s / (2.0 * k));
        }
    TransformFamily mf = TransformFamily::mf(opt.mu);
    double mf_err = 0.0;
    for (double t : ts)
        for (double x : {1.5, 2.0, 3.0}) {
            double s = yor_generalized(mf, t, x), e = yor_generalized(mf, t, x, YorRepr::Elementary);
            mf_err = std::max(mf_err, std::fabs(s - e) / std::fabs(s));
        }
    return {below(3, "theta_elementary_vs_spectral", theta_err, 1e-6, "max rel err on {0.5 1 2}x{0.5 1 2}"),
            below(3, "generalized_yor_" + mf.name() + "_elementary_vs_spectral", mf_err, 1e-6,
                  "max rel err on {0.5 1 2}x{1.5 2 3}"),
            below(3, "theta_equals_half_kl_generalized_yor_at_t/2", half_err, 1e-8,
                  fmt("max rel err; theta/(2*vartheta_kl) = %.6f so a factor 2 fails", double_ratio))};
}

Results heat_suite(const CheckOptions& opt)
{
    Results out;
    for (const auto& fam : families(opt)) {
        SpectralEngine eng(fam, 0.3);
        std::string n = fam.name();
        auto pts = space_points(fam);
        double min_p = inf, sym = 0.0;
        for (double t : {0.5, 1.0, 2.0})
            for (double x : pts)
                for (double y : pts) {
                    double a = eng.heat(t, x, y), b = eng.heat(t, y, x);
                    min_p = std::min(min_p, a);
                    sym = std::max(sym, std::fabs(a - b) / std::max(std::fabs(a), 1e-300));
                }
        out.push_back({4, "positivity_" + n, min_p, 0.0, min_p > 0.0, "min kernel value on 3x4x4 grid (must be > 0)"});
        out.push_back(below(4, "symmetry_" + n, sym, 1e-8, "max rel |p(x,y)-p(y,x)| on 3x4x4 grid"));
        double x0 = anchor_x(fam), y0 = anchor_y(fam);
        double worst_mass = -inf;
        for (double t : {0.5, 1.0}) worst_mass = std::max(worst_mass, heat_mass(eng, t, x0));
        out.push_back(below(4, "mass_" + n, worst_mass - 1.0, 1e-6, fmt("max mass - 1 at t in {0.5 1}; mass %.12g", worst_mass)));
        double ck = 0.0;
        for (double t : {0.3, 0.7})
            for (double s : {0.3, 0.7}) ck = std::max(ck, chapman_kolmogorov_residual(eng, t, s, x0, y0));
        out.push_back(below(4, "chapman_kolmogorov_" + n, ck, 1e-4, "max rel residual for (t s) in {0.3 0.7}^2"));
        out.push_back(below(4, "pde_" + n, pde_residual(eng, 1.0, x0, y0), 1e-3, "rel residual at t=1"));
    }
    if (wants(opt, FamilyTag::MehlerFock)) {
        SpectralEngine eng(TransformFamily::mf(0.5), 0.3);
        double err = 0.0;
        const double pts[5][3] = {{0.3, 0.5, 2.0}, {0.5, 1.0, 1.5}, {1.0, 1.0, 1.0}, {2.0, 1.0, 3.0}, {1.0, 2.0, 0.5}};
        for (const auto& p : pts) {
            double x = std::cosh(p[1]), y = std::cosh(p[2]);
            double c = mf_half_closed_form(p[0], x, y);
            err = std::max(err, std::fabs(eng.heat(p[0], x, y) - c) / c);
        }
        out.push_back(below(4, "mf(mu=0.5)_closed_form", err, 1e-6, "max rel err at 5 points; prefactor 1/sqrt(pi t)"));
    }
    return out;
}

Results resolvent_suite(const CheckOptions& opt)
{
    Results out;
    for (const auto& fam : families(opt)) {
        double x = is_mf(fam) ? 1.2 : 0.5, y = is_mf(fam) ? 5.0 : 3.0;
        for (double lambda : {-0.5, -1.0, -2.0}) {
            LaplaceCheck c = resolvent_laplace_check(fam, lambda, x, y);
            double err = c.quad.converged ? c.rel_error() : inf;
            out.push_back(below(5, "laplace_" + fam.name() + fmt("_lambda=%g", lambda), err, 1e-4,
                                fmt("resolvent %.12g laplace %.12g", c.resolvent, c.laplace)));
        }
    }
    return out;
}

Results monotonicity_suite(const CheckOptions& opt)
{
    Results out;
    auto run = [&](const TransformFamily& a, const TransformFamily& b, const std::vector<double>& pts) {
        SpectralEngine ea(a, 1.0), eb(b, 1.0);
        double min_gap = inf, max_gap = -inf;
        for (double x : pts)
            for (double y : pts) {
                double g = ea.heat(1.0, x, y) - eb.heat(1.0, x, y);
                min_gap = std::min(min_gap, g);
                max_gap = std::max(max_gap, g);
            }
        out.push_back({6, "monotone_" + a.name() + "_vs_" + b.name(), min_gap, -1e-8, min_gap >= -1e-8,
                       fmt("min gap p_first - p_second on 3x3 grid at t=1 (must be >= -1e-8); max gap %.3g", max_gap)});
    };
    if (wants(opt, FamilyTag::MehlerFock)) {
        std::vector<double> pts{1.2, 2.0, 4.0};
        run(TransformFamily::mf(0.0), TransformFamily::mf(0.3), pts);
        run(TransformFamily::mf(0.3), TransformFamily::mf(0.6), pts);
    }
    if (wants(opt, FamilyTag::IndexWhittaker)) {
        std::vector<double> pts{0.5, 1.0, 3.0};
        run(TransformFamily::iw(0.0), TransformFamily::iw(-0.5), pts);
        run(TransformFamily::iw(-0.5), TransformFamily::iw(-1.0), pts);
    }
    return out;
}

Results feller_suite(const CheckOptions&)
{
    struct Case {
        std::string op, p_text;
        Endpoint end;
        BoundaryClass expected;
        std::string condition;
        double anchors[2];
    };
    const std::vector<Case> cases{
        {"kl", "x", Endpoint::A, BoundaryClass::Natural, "no boundary condition", {1.0, 2.0}},
        {"kl", "x", Endpoint::B, BoundaryClass::Natural, "no boundary condition", {1.0, 2.0}},
        {"iw:-0.5", "x", Endpoint::A, BoundaryClass::Natural, "no boundary condition", {1.0, 2.0}},
        {"iw:-0.5", "x", Endpoint::B, BoundaryClass::Natural, "no boundary condition", {1.0, 2.0}},
        {"mf:0", "(x^2-1)", Endpoint::A, BoundaryClass::Entrance, "lim_{x->1} (x^2-1) u'(x) = 0", {2.0, 3.0}},
        {"mf:0", "(x^2-1)", Endpoint::B, BoundaryClass::Natural, "no boundary condition", {2.0, 3.0}},
        {"mf:0.5", "(x^2-1)", Endpoint::A, BoundaryClass::Natural, "lim_{x->1} (x^2-1) u'(x) = 0", {2.0, 3.0}},
        {"mf:0.5", "(x^2-1)", Endpoint::B, BoundaryClass::Natural, "no boundary condition", {2.0, 3.0}},
    };
    Results out;
    for (const auto& c : cases) {
        SLOperator op = builtin_operator(c.op);
        int mismatches = 0;
        std::string got;
        for (double anchor : c.anchors) {
            BoundaryReport r = classify(op, c.end, anchor);
            std::string cond = r.classification == BoundaryClass::Undecided ? "undecided" : boundary_condition(r, c.p_text);
            if (r.classification != c.expected || cond != c.condition) ++mismatches;
            got = to_string(r.classification) + ": " + cond;
        }
        std::string end = c.end == Endpoint::A ? "a" : "b";
        out.push_back({7, "classify_" + c.op + "_endpoint_" + end, static_cast<double>(mismatches), 0.0, mismatches == 0,
                       got + " (expected " + to_string(c.expected) + "; 2 anchors)"});
    }
    return out;
}

CheckResult z_check(const std::string& name, const MCEstimate& mc, double reference, const std::string& what)
{
    double z = mc.z_score(reference);
    char buf[200];
    std::snprintf(buf, sizeof buf, "z-score; mc %.8g se %.3g %s %.10g paths %ld steps %d", mc.mean, mc.std_error,
                  what.c_str(), reference, mc.n_paths, mc.n_steps);
    return below(8, name, z, 3.0, buf);
}

Results bougerol_suite(const CheckOptions& opt)
{
    BougerolCheck c = bougerol_check(1.0, 1.0, opt.n_paths, 400, opt.seed);
    return {below(8, "bougerol_quadrature_vs_spectral", std::fabs(c.rhs_quad - c.spectral_double), 1e-4,
                  fmt("abs diff; elementary %.12g spectral %.12g", c.rhs_quad, c.spectral_double)),
            z_check("bougerol_mc", c.lhs_mc, c.rhs_quad, "elementary")};
}

Results conditional_suite(const CheckOptions& opt)
{
    ConditionalLaplaceCheck c = conditional_laplace_check(1.0, 1.0, 1.0, opt.n_paths, opt.seed);
    return {z_check("conditional_laplace_bridge_mc", c.mc, c.closed, "closed")};
}

Results feynman_kac_suite(const CheckOptions& opt)
{
    Results out;
    Fn psi = [](double y) { return std::exp(-y); };
    if (wants(opt, FamilyTag::KontorovichLebedev)) {
        SpectralEngine eng(TransformFamily::kl(), 0.5);
        double ref = spectral_expectation(eng, psi, 0.5, 1.0);
        auto run = mc_feynman_kac(TransformFamily::kl(), psi, 0.5, 1.0, opt.n_paths, 400, opt.seed);
        out.push_back(z_check("feynman_kac_kl", run.estimate, ref, "spectral"));
    }
    if (wants(opt, FamilyTag::MehlerFock)) {
        SpectralEngine eng(TransformFamily::mf(0.0), 0.5);
        double ref = spectral_expectation(eng, psi, 0.5, 2.0);
        auto run = mc_feynman_kac(TransformFamily::mf(0.0), psi, 0.5, 2.0, opt.n_paths, 200, opt.seed);
        out.push_back(z_check("feynman_kac_mf(mu=0)", run.estimate, ref, "spectral"));
        double x0 = std::cosh(1.0);
        TransformFamily half = TransformFamily::mf(0.5);
        SpaceGrid g = space_grid(half, x0, x0, 0.5);
        std::vector<double> terms(g.x.size());
        for (size_t i = 0; i < g.x.size(); ++i) terms[i] = g.w[i] * psi(g.x[i]) * mf_half_closed_form(0.5, x0, g.x[i]);
        double closed = pairwise_sum(terms.data(), terms.size());
        auto run_half = mc_feynman_kac(half, psi, 0.5, x0, opt.n_paths, 200, opt.seed);
        out.push_back(z_check("feynman_kac_mf(mu=0.5)_killed", run_half.estimate, closed, "closed-form kernel"));
    }
    return out;
}

Results evolution_suite(const CheckOptions& opt)
{
    Results out;
    for (const auto& fam : families(opt)) {
        SpectralEngine eng(fam, 0.3);
        double worst = 0.0;
        for (double t : {0.3, 0.7})
            for (double s : {0.3, 0.7}) worst = std::max(worst, evolution_residual(eng, t, s, anchor_x(fam)));
        out.push_back(below(8, "evolution_" + fam.name(), worst, 1e-4, "max abs residual for (t s) in {0.3 0.7}^2"));
    }
    return out;
}

Results hartman_watson_suite(const CheckOptions&)
{
    Results out;
    for (double x : {0.5, 1.0, 2.0}) {
        HartmanWatsonMass m = hartman_watson_mass(x);
        out.push_back(below(9, fmt("hartman_watson_mass_x=%g", x), std::fabs(m.total - 1.0), 1e-3,
                            fmt("total %.12g head bound %.3g", m.total, m.head_bound)));
    }
    return out;
}

using Suite = Results (*)(const CheckOptions&);

const std::map<std::string, std::pair<int, Suite>>& registry()
{
    static const std::map<std::string, std::pair<int, Suite>> r{
        {"special", {1, special_functions}},
        {"roundtrip", {2, [](const CheckOptions& o) { return transforms_suite(o, true, false); }}},
        {"parseval", {2, [](const CheckOptions& o) { return transforms_suite(o, false, true); }}},
        {"transforms", {2, [](const CheckOptions& o) { return transforms_suite(o, true, true); }}},
        {"yor", {3, yor_suite}},
        {"heat", {4, heat_suite}},
        {"resolvent", {5, resolvent_suite}},
        {"monotonicity", {6, monotonicity_suite}},
        {"feller", {7, feller_suite}},
        {"bougerol", {8, bougerol_suite}},
        {"conditional", {8, conditional_suite}},
        {"feynman-kac", {8, feynman_kac_suite}},
        {"evolution", {8, evolution_suite}},
        {"hartman-watson", {9, hartman_watson_suite}},
    };
    return r;
}

}

const std::vector<std::string>& check_suite_names()
{
    static const std::vector<std::string> names{"special",   "roundtrip",    "parseval", "transforms",  "yor",
                                                "heat",      "resolvent",    "monotonicity", "feller",  "bougerol",
                                                "conditional", "feynman-kac", "evolution", "hartman-watson"};
    return names;
}

int suite_criterion(const std::string& suite)
{
    auto it = registry().find(suite);
    if (it == registry().end()) throw std::invalid_argument("unknown check suite '" + suite + "'");
    return it->second.first;
}

std::vector<CheckResult> run_check(const std::string& suite, const CheckOptions& opt)
{
    auto it = registry().find(suite);
    if (it == registry().end()) throw std::invalid_argument("unknown check suite '" + suite + "'");
    return it->second.second(opt);
}

std::string checks_csv(const std::vector<CheckResult>& results)
{
    std::string out = "criterion,check,measured,tolerance,pass,detail\n";
    char buf[128];
    for (const auto& r : results) {
        std::string detail;
        for (char c : r.detail) detail += c == '"' ? std::string("\"\"") : std::string(1, c);
        std::snprintf(buf, sizeof buf, "%d,", r.criterion);
        out += buf + r.name;
        std::snprintf(buf, sizeof buf, ",%.15g,%.15g,%s,", r.measured, r.tolerance, r.pass ? "PASS" : "FAIL");
        out += buf + ("\"" + detail + "\"\n");
    }
    return out;
}

bool all_pass(const std::vector<CheckResult>& results)
{
    return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
}

}
